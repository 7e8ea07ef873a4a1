#include <doctest.h>

#include "fpt/kernels.hpp"
#include "support/oracles.hpp"

using namespace fpt;
using namespace fpt::testing;

namespace {

struct Fixture {
  StmHistory history = build_stm_history(make_cr3bp_model(halo_orbit().params), halo_orbit(),
                                         300, IntegratorConfig{});
  LinearBvp bvp{history};
  ReachableSet set = reachable_set(assemble_e_star(bvp.e_form()), 3.5e-4);
  std::vector<Vec6> samples = sample_boundary(set, 257, 3);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST_CASE("parallel sample propagation equals the serial reference") {
  const auto& f = fixture();
  const auto par = kernels::propagate_samples(f.bvp, f.samples, 7);
  const auto ser = kernels::propagate_samples_serial(f.bvp, f.samples, 7);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].t == ser[i].t);
    CHECK(par[i].dx == ser[i].dx);
    CHECK(par[i].thrust == ser[i].thrust);
    CHECK(par[i].cost == ser[i].cost);
  }
}

TEST_CASE("parallel costs equal the serial reference") {
  const auto& f = fixture();
  CHECK(kernels::sample_costs(f.set.form, f.samples) ==
        kernels::sample_costs_serial(f.set.form, f.samples));
}

TEST_CASE("position envelope equals the serial reference and brackets samples") {
  const auto& f = fixture();
  const auto par = kernels::position_envelope(f.bvp, f.samples);
  const auto ser = kernels::position_envelope_serial(f.bvp, f.samples);
  CHECK(par.t == ser.t);
  CHECK(par.max_position == ser.max_position);
  CHECK(par.min_position == ser.min_position);
  const auto tr = f.bvp.propagate(f.samples[5], f.samples[5]);
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const double r = tr.dx[k].head<3>().norm();
    CHECK(r <= par.max_position[k] * (1 + 1e-14));
    CHECK(r >= par.min_position[k] * (1 - 1e-14));
    CHECK(std::abs(tr.dx[k](0)) <= par.max_abs[k](0) * (1 + 1e-14));
  }
}

TEST_CASE("empty input gives empty output") {
  const auto& f = fixture();
  CHECK(kernels::propagate_samples(f.bvp, {}, 1).empty());
  CHECK(kernels::sample_costs(f.set.form, {}).empty());
  CHECK(kernels::max_threads() >= 1);
}
