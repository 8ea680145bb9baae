#include "doctest.h"

#include "numa/golden.hpp"
#include "numa/homalg.hpp"

using namespace numa;

namespace {

struct FaultGuard {
  FaultGuard() { set_snf_fault(true); }
  ~FaultGuard() { set_snf_fault(false); }
};

}  // namespace

TEST_CASE("criteria report out-of-range ids") {
  CHECK_THROWS_AS(run_criterion(0), Error);
  CHECK_THROWS_AS(run_criterion(kCriterionCount + 1), Error);
}

TEST_CASE("a broken Smith normal form fails the homology criteria") {
  FaultGuard guard;
  for (int id : {1, 5, 6}) {
    const auto r = run_criterion(id);
    CHECK_MESSAGE(!r.passed, "criterion ", id, " passed under a faulty SNF");
    CHECK_FALSE(r.detail.empty());
  }
  for (int id : {3, 4, 7, 10, 11, 12}) {
    const auto r = run_criterion(id);
    CHECK_MESSAGE(r.passed, "criterion ", id, ": ", r.detail);
  }
}
