#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hbfsm/txrx.hpp"

using namespace hbfsm;

namespace {
const CodebookSpec kFa{};  // array-response default

ScenarioChannels scenario(uint64_t seed, int n_a = 4, int k = 2, int n_t = 8, int n_r = 1,
                          int l = 3) {
  return generate_scenario(n_a, k, n_t, n_r, l, Stream(seed));
}
}  // namespace

TEST_CASE("design shapes and the single-antenna combiner closed form") {
  const ScenarioChannels sc = scenario(1);
  const LinkDesign d = design_link(sc, kFa);
  CHECK(d.n_a == 4);
  CHECK(d.k == 2);
  REQUIRE(d.f.size() == 8);
  REQUIRE(d.w.size() == 8);
  for (const CVector& f : d.f) CHECK(f.norm() == doctest::Approx(1.0));

  // n_r = 1: W_i = (H_i^+)^H reduces to w_{a,i} = h_{a,i} / sum_b |h_{b,i}|^2
  for (int i = 0; i < 2; ++i) {
    double denom = 0.0;
    for (int a = 0; a < 4; ++a) denom += std::norm(d.h_user[i](0, a));
    for (int a = 0; a < 4; ++a) {
      const cd want = d.h_user[i](0, a) / denom;
      CHECK(std::abs(d.combiner(a, i)(0) - want) < 1e-12);
    }
  }
}

TEST_CASE("combiner wipes the stacked row: w^H [h_a]_a = e-like normalization") {
  // W_i H_i = (H_i^+ )^H H_i; for full-rank wide H_i (n_r=1, n_a>1) this is
  // a projection, and in particular sum_a w_{a,i}^H h_{a,i} = rank = 1
  const ScenarioChannels sc = scenario(2);
  const LinkDesign d = design_link(sc, kFa);
  for (int i = 0; i < 2; ++i) {
    cd acc = 0.0;
    for (int a = 0; a < 4; ++a) acc += d.combiner(a, i).dot(d.v[i][size_t(a) * 2 + i]);
    CHECK(std::abs(acc - cd(1, 0)) < 1e-10);
  }
}

TEST_CASE("effective channel entries are combiner-beamformer couplings") {
  const ScenarioChannels sc = scenario(3);
  const LinkDesign d = design_link(sc, kFa);
  const std::vector<int> tuple{2, 1};
  const CMatrix he = d.h_eff(tuple);
  REQUIRE(he.rows() == 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const cd direct = (d.combiner(tuple[i], i).adjoint() *
                         (sc.at(tuple[j], i).H * d.beamformer(tuple[j], j)))(0);
      CHECK(std::abs(he(i, j) - direct) < 1e-12);
    }
}

TEST_CASE("zero-forcing precoder on clean matrices") {
  const CMatrix id = CMatrix::Identity(2, 2);
  const Precoder p1 = zf_precoder(id, 1.0);
  CHECK(!p1.degenerate);
  CHECK((p1.p - id).norm() < 1e-12);
  const Precoder p2 = zf_precoder(2.0 * id, 3.0);
  CHECK((p2.p - 1.5 * id).norm() < 1e-12);
  CHECK(p2.cond == doctest::Approx(1.0));
}

TEST_CASE("2x2 fast path agrees with the SVD pseudo-inverse") {
  Stream s(41);
  for (int t = 0; t < 50; ++t) {
    CMatrix h(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) h(i, j) = s.cnormal();
    const Precoder fast = zf_precoder(h, 1.0);
    const CMatrix ref = pseudo_inverse(h);
    CHECK((fast.p - ref).norm() < 1e-9 * std::max(1.0, ref.norm()));
    CHECK(fast.cond == doctest::Approx(condition_number(h)).epsilon(1e-6));
    // ZF identity
    CHECK((h * fast.p - CMatrix::Identity(2, 2)).norm() < 1e-8 * std::max(1.0, ref.norm()));
  }
}

TEST_CASE("singular effective channels are flagged, not fatal") {
  const CMatrix ones = CMatrix::Ones(2, 2);
  const Precoder p = zf_precoder(ones, 1.0);
  CHECK(p.degenerate);
  CHECK(all_finite(p.p));
  CMatrix big = CMatrix::Identity(3, 3);
  big(2, 2) = 1e-15;
  CHECK(zf_precoder(big, 1.0).degenerate);
}

TEST_CASE("beta sample and estimate") {
  CHECK(beta_sample(CMatrix::Identity(2, 2)) == doctest::Approx(1.0));
  CHECK(beta_sample(2.0 * CMatrix::Identity(2, 2)) == doctest::Approx(2.0));

  const SystemDims dims{2, 4, 8, 1, 3};
  const double b1 = estimate_beta(dims, kFa, 200, Stream(42));
  const double b2 = estimate_beta(dims, kFa, 200, Stream(42));
  CHECK(b1 == b2);
  CHECK(b1 > 0.0);
  CHECK_THROWS_AS(estimate_beta(dims, kFa, 0, Stream(1)), std::invalid_argument);
}

TEST_CASE("transmit applies the model equation") {
  const ScenarioChannels sc = scenario(5);
  LinkDesign d = design_link(sc, kFa);
  d.beta = 0.9;
  TxUse use;
  use.aa = {3, 0};
  use.labels = {1, 2};
  const Constellation c = build_constellation(4);
  use.s = CVector(2);
  use.s << c.points[1], c.points[2];
  const double rho = 7.0;

  Stream noise(77);
  const RxUse quiet = transmit(use, d, rho, 0.0, noise);
  const Precoder pre = zf_precoder(d.h_eff(use.aa), d.beta);
  const CVector x = pre.p * use.s;
  for (int i = 0; i < 2; ++i) {
    CVector want = CVector::Zero(1);
    for (int j = 0; j < 2; ++j) want += d.v[i][size_t(use.aa[j]) * 2 + j] * x(j);
    want *= std::sqrt(rho);
    CHECK((quiet.r[i] - want).norm() < 1e-12);
  }

  // noiseless transmit must not consume the noise stream
  Stream a(5), b(5);
  transmit(use, d, rho, 0.0, a);
  CHECK(a.next_u64() == b.next_u64());

  Stream n2(78);
  const RxUse loud = transmit(use, d, rho, 1.0, n2);
  CHECK((loud.r[0] - quiet.r[0]).norm() > 0.0);
}

TEST_CASE("zero-noise detection round trip") {
  const Constellation c = build_constellation(4);
  Stream master(91);
  long correct = 0, total = 0, degenerate_misses = 0;
  for (int f = 0; f < 200; ++f) {
    const ScenarioChannels sc = generate_scenario(4, 2, 8, 1, 3, master.fork(f));
    LinkDesign d = design_link(sc, kFa);
    d.beta = 1.0;
    Stream bits = master.fork(1000 + f);
    Stream noise(0);
    for (int u = 0; u < 50; ++u) {
      TxUse use;
      use.aa = {int(bits.below(4)), int(bits.below(4))};
      use.labels = {int(bits.below(4)), int(bits.below(4))};
      use.s = CVector(2);
      use.s << c.points[size_t(use.labels[0])], c.points[size_t(use.labels[1])];
      const RxUse rx = transmit(use, d, 4.0, 0.0, noise);
      bool all = true;
      for (int i = 0; i < 2; ++i) {
        const Detected det = ml_detect(rx.r[i], d, i, 4.0, c);
        all &= det.aa == use.aa[i] && det.label == use.labels[i];
      }
      total += 1;
      if (all)
        correct += 1;
      else if (rx.degenerate)
        degenerate_misses += 1;
    }
  }
  // perfect except possibly on flagged degenerate tuples
  CHECK(correct + degenerate_misses == total);
  CHECK(double(correct) / double(total) > 0.999);
}

TEST_CASE("detector ties resolve to the lowest pair") {
  // hand-built link: k=1, n_a=2, n_r=1, both combiners orthogonal to r
  LinkDesign d;
  d.n_a = 2;
  d.k = 1;
  d.n_t = 1;
  d.n_r = 1;
  d.beta = 1.0;
  d.w.assign(2, CVector::Zero(1));
  const Constellation c = build_constellation(2);
  CVector r = CVector::Zero(1);
  r(0) = cd(5.0, 0.0);  // z = 0 for both arrays -> all four hypotheses tie at 1
  const Detected det = ml_detect(r, d, 0, 1.0, c);
  CHECK(det.aa == 0);
  CHECK(det.label == 0);
}
