#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hbfsm/channel.hpp"

using namespace hbfsm;

TEST_CASE("steering vector norm and phase progression") {
  const int n = 8;
  const double th = 1.234;
  const CVector a = steering_vector(th, n);
  CHECK(a.norm() == doctest::Approx(1.0));
  const cd step = std::exp(cd(0, M_PI * std::sin(th)));
  for (int i = 1; i < n; ++i) CHECK(std::abs(a(i) / a(i - 1) - step) < 1e-12);
  CHECK(std::abs(a(0) - cd(1.0 / std::sqrt(8.0), 0)) < 1e-12);

  // angle 0: all entries equal
  const CVector z = steering_vector(0.0, 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(z(i) - cd(0.5, 0)) < 1e-12);
}

TEST_CASE("raw-phase variant uses the argument directly") {
  const int n = 6;
  const double x = 0.77;
  const CVector a = steering_vector_raw(x, n);
  const cd step = std::exp(cd(0, M_PI * x));
  for (int i = 1; i < n; ++i) CHECK(std::abs(a(i) / a(i - 1) - step) < 1e-12);
  // and the sin version is the raw version of sin(angle)
  const CVector b = steering_vector(x, n);
  const CVector c = steering_vector_raw(std::sin(x), n);
  CHECK((b - c).norm() < 1e-14);
}

TEST_CASE("single-path channel reconstructs exactly") {
  PathSet p;
  p.alpha = {cd(0.3, -1.1)};
  p.aod = {2.0};
  p.aoa = {5.5};
  const int n_t = 8, n_r = 2;
  const CMatrix h = channel_from_paths(p, n_t, n_r);
  const CMatrix want = std::sqrt(double(n_t * n_r)) * p.alpha[0] *
                       (steering_vector(p.aoa[0], n_r) * steering_vector(p.aod[0], n_t).adjoint());
  CHECK((h - want).norm() < 1e-12);
}

TEST_CASE("channel ensemble carries the nominal energy") {
  Stream s(31);
  const int n_t = 8, n_r = 2, l = 3;
  double acc = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) acc += generate_channel(n_t, n_r, l, s.fork(i)).H.squaredNorm();
  CHECK(acc / n == doctest::Approx(double(n_t * n_r)).epsilon(0.05));
}

TEST_CASE("generate_channel is a pure function of its stream") {
  const ChannelRealization a = generate_channel(8, 1, 3, Stream(77));
  const ChannelRealization b = generate_channel(8, 1, 3, Stream(77));
  CHECK((a.H - b.H).norm() == 0.0);
  CHECK(a.paths.aod == b.paths.aod);
  const ChannelRealization c = generate_channel(8, 1, 3, Stream(78));
  CHECK((a.H - c.H).norm() > 0.0);
}

TEST_CASE("scenario indexing and independence") {
  const ScenarioChannels sc = generate_scenario(4, 2, 8, 1, 3, Stream(55));
  CHECK(int(sc.ch.size()) == 8);
  CHECK(sc.n_a == 4);
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 2; ++i) {
      CHECK(sc.at(a, i).H.rows() == 1);
      CHECK(sc.at(a, i).H.cols() == 8);
      CHECK(sc.at(a, i).paths.paths() == 3);
    }
  CHECK((sc.at(0, 0).H - sc.at(1, 0).H).norm() > 0.0);
  CHECK((sc.at(0, 0).H - sc.at(0, 1).H).norm() > 0.0);

  // the (a, i) entry does not move when n_a grows
  const ScenarioChannels big = generate_scenario(8, 2, 8, 1, 3, Stream(55));
  CHECK((sc.at(2, 1).H - big.at(2, 1).H).norm() == 0.0);
}

TEST_CASE("path dump round-trips against the committed fixture") {
  const ScenarioChannels sc = generate_scenario(2, 2, 4, 1, 2, Stream::root(90210).fork(1));
  std::ostringstream now;
  dump_paths_csv(now, sc);
  REQUIRE(now.str().substr(0, 33) == "a,i,l,alpha_re,alpha_im,aod,aoa\n1");

  const std::string path = std::string(HBFSM_TEST_DATA_DIR) + "/paths_fixture.csv";
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    // bootstrap: freeze the current output as the fixture
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << now.str();
    return;
  }
  std::ostringstream want;
  want << in.rdbuf();
  CHECK(now.str() == want.str());
}
