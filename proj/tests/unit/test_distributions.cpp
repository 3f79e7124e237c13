#include <doctest.h>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/inverse_gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "gigg/distributions.hpp"
#include "gigg/errors.hpp"
#include "support.hpp"

using gigg::GigParams;
using gigg::Rng;

namespace {

std::vector<double> draws(std::size_t n, const std::function<double()>& f) {
  std::vector<double> out(n);
  for (auto& v : out) v = f();
  return out;
}

}  // namespace

TEST_CASE("gig_pdf reference values") {
  // e^{-1} / (2 K_{1/2}(1)) with K_{1/2}(1) = sqrt(pi/2) e^{-1}
  CHECK(gigg::gig_pdf(1.0, {-0.5, 1.0, 1.0}) == doctest::Approx(1.0 / (2.0 * std::sqrt(M_PI / 2.0))).epsilon(1e-12));
  CHECK(gigg::gig_pdf(1.0, {-0.5, 1.0, 1.0}) == doctest::Approx(0.398942).epsilon(1e-6));
  const double expected = testing::oracle_gig_pdf(1.0, 1.0, 2.0, 2.0);
  CHECK(expected == doctest::Approx(0.4838038).epsilon(1e-6));
  CHECK(gigg::gig_pdf(1.0, {1.0, 2.0, 2.0}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gig_pdf agrees with the Boost-based density") {
  for (double lam : {-2.0, -0.5, 0.5, 3.0}) {
    for (double psi : {0.1, 1.0, 10.0}) {
      for (double chi : {0.1, 1.0, 10.0}) {
        for (double x : {0.01, 0.7, 4.0}) {
          CAPTURE(lam);
          CAPTURE(psi);
          CAPTURE(chi);
          CHECK(gigg::gig_pdf(x, {lam, psi, chi}) ==
                doctest::Approx(testing::oracle_gig_pdf(x, lam, psi, chi)).epsilon(1e-11));
        }
      }
    }
  }
}

TEST_CASE("densities integrate to one") {
  for (double lam : {-2.0, -0.5, 0.5, 3.0}) {
    for (double psi : {0.1, 1.0, 10.0}) {
      for (double chi : {0.1, 1.0, 10.0}) {
        CAPTURE(lam);
        CAPTURE(psi);
        CAPTURE(chi);
        const GigParams p{lam, psi, chi};
        CHECK(testing::total_mass([&](double x) { return gigg::gig_pdf(x, p); }) == doctest::Approx(1.0).epsilon(1e-6));
      }
    }
  }
  CHECK(testing::total_mass([](double x) { return gigg::gig_pdf(x, {1.0, 2.0, 2.0}); }) ==
        doctest::Approx(1.0).epsilon(1e-8));
  for (double a : {0.05, 0.5, 1.0, 2.0}) {
    for (double b : {0.05, 0.5, 1.0, 2.0}) {
      CAPTURE(a);
      CAPTURE(b);
      CHECK(testing::total_mass([&](double x) { return gigg::beta_prime_pdf(x, a, b); }) ==
            doctest::Approx(1.0).epsilon(1e-6));
      CHECK(testing::total_mass([&](double x) { return gigg::gamma_pdf(x, a + 0.5, b); }) ==
            doctest::Approx(1.0).epsilon(1e-6));
      CHECK(testing::total_mass([&](double x) { return gigg::inverse_gamma_pdf(x, a + 0.5, b); }) ==
            doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  CHECK(testing::total_mass([](double x) { return gigg::beta_prime_pdf(x, 2.0, 3.0); }) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(testing::total_mass([](double x) { return gigg::half_cauchy_pdf(x, 2.0); }) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gig_pdf reciprocal symmetry") {
  for (double lam : {-2.0, -0.5, 0.5, 3.0}) {
    for (double psi : {0.1, 1.0, 10.0}) {
      for (double chi : {0.1, 1.0, 10.0}) {
        for (double x : {0.05, 0.9, 3.0, 20.0}) {
          const double lhs = gigg::gig_pdf(x, {lam, psi, chi});
          const double rhs = gigg::gig_pdf(1.0 / x, {-lam, chi, psi}) / (x * x);
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("gig_pdf stays finite for extreme rate products") {
  for (double lam : {-2.0, -0.5, 0.5, 3.0}) {
    for (const auto& [psi, chi] : {std::pair{1e4, 1e4}, std::pair{1e-6, 1e-6}, std::pair{1e8, 1.0},
                                   std::pair{1.0, 1e-12}, std::pair{1e-12, 1.0}}) {
      const GigParams p{lam, psi, chi};
      Rng rng(3);
      const double v = gigg::gig_pdf(gigg::gig_sample(rng, p), p);
      CAPTURE(lam);
      CAPTURE(psi);
      CAPTURE(chi);
      CHECK(std::isfinite(v));
      CHECK(v > 0.0);
    }
  }
}

TEST_CASE("gig parameter domain") {
  CHECK_THROWS_AS(gigg::gig_pdf(1.0, {1.0, 0.0, 1.0}), gigg::ParameterDomainError);
  CHECK_THROWS_AS(gigg::gig_pdf(1.0, {-1.0, 1.0, 0.0}), gigg::ParameterDomainError);
  CHECK_THROWS_AS(gigg::gig_pdf(1.0, {0.0, 1.0, 0.0}), gigg::ParameterDomainError);
  CHECK_THROWS_AS(gigg::gig_pdf(-1.0, {1.0, 1.0, 1.0}), gigg::ParameterDomainError);
  Rng rng(1);
  CHECK_THROWS_AS(gigg::gig_sample(rng, {1.0, -1.0, 1.0}), gigg::ParameterDomainError);
  CHECK(GigParams{1.0, 0.0, 1.0}.floored().proper());
  CHECK_NOTHROW(gigg::gig_pdf(1.0, {1.0, 2.0, 0.0}));
}

TEST_CASE("gig_sample mean matches the Bessel-ratio moment") {
  Rng rng(2024);
  const auto x = draws(1000000, [&] { return gigg::gig_sample(rng, {1.0, 2.0, 2.0}); });
  const auto s = testing::mean_se(x);
  CHECK(std::abs(s.mean - testing::oracle_gig_mean(1.0, 2.0, 2.0)) < 3.0 * s.se);
}

TEST_CASE("gig_sample near the inverse-gamma limit") {
  Rng rng(7);
  const auto x = draws(100000, [&] { return gigg::gig_sample(rng, {-2.0, 1e-12, 2.0}); });
  const boost::math::inverse_gamma_distribution<double> ig(2.0, 1.0);
  CHECK(testing::ks_from_cdf(x, [&](double v) { return boost::math::cdf(ig, v); }) < 0.01);
}

TEST_CASE("gig_sample matches the density across sampler regions") {
  const GigParams cases[] = {
      {0.3, 0.05, 0.05},   // non-T-concave region
      {0.5, 1.0, 1.0},     // ratio of uniforms without shift
      {5.0, 2.0, 3.0},     // ratio of uniforms with mode shift
      {-1.7, 0.4, 9.0},    // negative order
      {0.0, 0.02, 0.5},    // zero order, small omega
      {1.0, 2.0, 2.0},
      {-3.5, 10.0, 0.1},
      {40.0, 1e-4, 1e-4},  // large order, tiny rates
  };
  std::uint64_t seed = 11;
  for (const auto& p : cases) {
    Rng rng(seed++);
    const auto x = draws(100000, [&] { return gigg::gig_sample(rng, p); });
    CAPTURE(p.lam);
    CAPTURE(p.psi);
    CAPTURE(p.chi);
    CHECK(testing::ks_from_density(x, [&](double v) { return testing::oracle_gig_pdf(v, p.lam, p.psi, p.chi); }) < 0.01);
    const auto s = testing::mean_se(x);
    CHECK(std::abs(s.mean - testing::oracle_gig_mean(p.lam, p.psi, p.chi)) < 4.0 * s.se);
  }
}

TEST_CASE("gig_sample is deterministic per stream") {
  Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) {
    const GigParams p{0.5 - i % 5, 0.1 + i % 3, 2.0};
    CHECK(gigg::gig_sample(a, p) == gigg::gig_sample(b, p));
  }
}

TEST_CASE("beta_prime_pdf values") {
  CHECK(gigg::beta_prime_pdf(1.0, 0.5, 0.5) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-12));
  // 1/pi * x^{-1/2} (1+x)^{-1}
  CHECK(gigg::beta_prime_pdf(1e-8, 0.5, 0.5) ==
        doctest::Approx(1.0 / (M_PI * std::sqrt(1e-8) * (1.0 + 1e-8))).epsilon(1e-12));
  CHECK(gigg::beta_prime_pdf(1e-8, 0.5, 0.5) == doctest::Approx(3183.1).epsilon(1e-5));
  CHECK_THROWS_AS(gigg::beta_prime_pdf(0.0, 1.0, 1.0), gigg::ParameterDomainError);
  CHECK_THROWS_AS(gigg::beta_prime_pdf(1.0, -1.0, 1.0), gigg::ParameterDomainError);
}

TEST_CASE("basic samplers") {
  Rng rng(5);
  const auto g = draws(1000000, [&] { return gigg::basic_sample(rng, gigg::BasicKind::Gamma, 3.0, 2.0); });
  const auto sg = testing::mean_se(g);
  CHECK(std::abs(sg.mean - 1.5) < 3.0 * sg.se);

  const auto ig = draws(1000000, [&] { return gigg::basic_sample(rng, gigg::BasicKind::InverseGamma, 3.0, 2.0); });
  const auto sig = testing::mean_se(ig);
  CHECK(std::abs(sig.mean - 1.0) < 3.0 * sig.se);

  auto hc = draws(1000000, [&] { return gigg::basic_sample(rng, gigg::BasicKind::HalfCauchy, 1.0, 2.0); });
  std::nth_element(hc.begin(), hc.begin() + hc.size() / 2, hc.end());
  // Standard error of the sample median: 1 / (2 f(m) sqrt(n)) with f(2) = 1/(2 pi).
  CHECK(std::abs(hc[hc.size() / 2] - 2.0) < 3.0 * M_PI / std::sqrt(1e6));

  CHECK_THROWS_AS(gigg::basic_sample(rng, gigg::BasicKind::Gamma, 0.0, 1.0), gigg::ParameterDomainError);
  CHECK_THROWS_AS(gigg::basic_sample(rng, gigg::BasicKind::HalfCauchy, 1.0, -1.0), gigg::ParameterDomainError);
  CHECK_THROWS_AS(gigg::basic_sample(rng, static_cast<gigg::BasicKind>(17), 1.0, 1.0), gigg::ParameterDomainError);
}

TEST_CASE("basic samplers match their distribution functions") {
  Rng rng(8);
  for (double shape : {0.05, 0.5, 1.0, 2.0}) {
    for (double rate : {0.1, 1.0, 10.0}) {
      CAPTURE(shape);
      CAPTURE(rate);
      const boost::math::gamma_distribution<double> gd(shape, 1.0 / rate);
      const auto g = draws(100000, [&] { return gigg::sample_gamma(rng, shape, rate); });
      CHECK(testing::ks_from_cdf(g, [&](double v) { return boost::math::cdf(gd, v); }) < 0.01);
      const boost::math::inverse_gamma_distribution<double> igd(shape, rate);
      const auto ig = draws(100000, [&] { return gigg::sample_inverse_gamma(rng, shape, rate); });
      CHECK(testing::ks_from_cdf(ig, [&](double v) { return boost::math::cdf(igd, v); }) < 0.01);
    }
  }
  const auto hc = draws(100000, [&] { return gigg::basic_sample(rng, gigg::BasicKind::HalfCauchy, 1.0, 0.5); });
  CHECK(testing::ks_from_cdf(hc, [](double v) { return 2.0 / M_PI * std::atan(v / 0.5); }) < 0.01);
}

TEST_CASE("tiny gamma shapes stay positive") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double x = gigg::sample_gamma(rng, 1e-3, 1.0);
    CHECK(x > 0.0);
    CHECK(std::isfinite(x));
  }
}
