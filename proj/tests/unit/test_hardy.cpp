#include <gtest/gtest.h>

#include <cmath>

#include <shellres/error.hpp>
#include <shellres/hardy.hpp>

namespace shellres {
namespace {

const ShellPotential kShell(1.0, 2.0, 10.0);
const ShellPotential kFree(1.0, 2.0, 0.0);

std::vector<Complex> sample(double e_max, int n, Complex (*g)(double)) {
  std::vector<Complex> out;
  for (double e : hardy_grid(e_max, n)) out.push_back(g(e));
  return out;
}

Complex inv_e_plus_i(double e) { return 1.0 / Complex(e, 1.0); }
Complex inv_e_minus_i(double e) { return 1.0 / Complex(e, -1.0); }
Complex inv_e2_plus_1(double e) { return 1.0 / (e * e + 1.0); }

TEST(HardyGrid, Layout) {
  const auto grid = hardy_grid(50.0, 4);
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_DOUBLE_EQ(grid[0], -50.0);
  EXPECT_DOUBLE_EQ(grid[1], -25.0);
  EXPECT_DOUBLE_EQ(grid[3], 25.0);
  EXPECT_THROW(hardy_grid(0.0, 16), InvalidArgument);
}

TEST(ClassifyHardy, RationalExamples) {
  const auto upper = classify_hardy(sample(50.0, 4096, inv_e_plus_i), 50.0);
  EXPECT_EQ(upper.status, CheckStatus::ok);
  EXPECT_EQ(upper.cls, HardyClass::upper);
  EXPECT_LT(upper.negative_time_fraction, 1e-3);

  const auto lower = classify_hardy(sample(50.0, 4096, inv_e_minus_i), 50.0);
  EXPECT_EQ(lower.cls, HardyClass::lower);
  EXPECT_LT(lower.positive_time_fraction, 1e-3);

  const auto neither = classify_hardy(sample(50.0, 4096, inv_e2_plus_1), 50.0);
  EXPECT_EQ(neither.cls, HardyClass::neither);
  EXPECT_GT(neither.negative_time_fraction, 1e-3);
  EXPECT_GT(neither.positive_time_fraction, 1e-3);

  for (const auto& v : {upper, lower, neither}) {
    EXPECT_NEAR(v.negative_time_fraction + v.positive_time_fraction, 1.0, 1e-12);
  }
}

TEST(ClassifyHardy, ConjugationFlipsClass) {
  auto samples = sample(50.0, 4096, [](double e) { return 1.0 / Complex(e - 2.0, 0.5); });
  const auto v = classify_hardy(samples, 50.0);
  for (Complex& s : samples) s = std::conj(s);
  const auto w = classify_hardy(samples, 50.0);
  EXPECT_EQ(v.cls, HardyClass::upper);
  EXPECT_EQ(w.cls, HardyClass::lower);
  EXPECT_NEAR(v.negative_time_fraction, w.positive_time_fraction, 1e-12);
}

TEST(ClassifyHardy, ScaleInvariant) {
  auto samples = sample(50.0, 4096, inv_e2_plus_1);
  const auto v = classify_hardy(samples, 50.0);
  for (Complex& s : samples) s *= Complex(0.0, 3e5);
  const auto w = classify_hardy(samples, 50.0);
  EXPECT_EQ(v.cls, w.cls);
  EXPECT_NEAR(v.negative_time_fraction, w.negative_time_fraction, 1e-12);
}

TEST(ClassifyHardy, Preconditions) {
  const auto few = sample(50.0, 512, inv_e_plus_i);
  EXPECT_THROW(classify_hardy(few, 50.0), InvalidArgument);
  const auto ok = sample(50.0, 1024, inv_e_plus_i);
  EXPECT_THROW(classify_hardy(ok, 50.0, 0.0), InvalidArgument);
  EXPECT_THROW(classify_hardy(ok, 50.0, 0.5), InvalidArgument);
  const std::vector<Complex> zeros(2048, Complex{});
  EXPECT_EQ(classify_hardy(zeros, 50.0).status, CheckStatus::inconclusive);
}

TEST(ClassifyHardy, InconclusiveOnPoorEdgeDecay) {
  const auto samples = sample(50.0, 4096, [](double e) { return Complex(e * e * e * e, 0.0); });
  const auto v = classify_hardy(samples, 50.0);
  EXPECT_EQ(v.status, CheckStatus::inconclusive);
  EXPECT_GT(v.edge_magnitude, 1e-8);
}

TEST(ArcProbe, ZeroFunction) {
  const std::vector<double> radii = {2.0, 4.0, 8.0, 16.0};
  const auto report = arc_growth_probe(EigenfunctionKind::sw, TestFunction::smooth_bump(3.0, {0.0}),
                                       -kPi / 4.0, radii, kShell);
  for (double m : report.magnitudes) EXPECT_EQ(m, 0.0);
  EXPECT_EQ(report.growth_ratio, 0.0);
}

TEST(ArcProbe, Preconditions) {
  const std::vector<double> radii = {2.0, 4.0};
  EXPECT_THROW(arc_growth_probe(EigenfunctionKind::sw, TestFunction::exp_decay(1.0), -kPi / 4.0, radii, kShell),
               InvalidArgument);
  EXPECT_THROW(arc_growth_probe(EigenfunctionKind::sw, TestFunction::smooth_bump(3.0), -0.1, radii, kShell),
               InvalidArgument);
  const std::vector<double> unordered = {4.0, 2.0};
  EXPECT_THROW(arc_growth_probe(EigenfunctionKind::sw, TestFunction::smooth_bump(3.0), -kPi / 4.0, unordered, kShell),
               InvalidArgument);
}

TEST(ArcProbe, FreeParticleGrowsInLowerHalfPlane) {
  const std::vector<double> radii = {2.0, 4.0, 8.0, 16.0};
  const auto report = arc_growth_probe(EigenfunctionKind::sw, TestFunction::smooth_bump(3.0),
                                       -kPi / 4.0, radii, kFree);
  EXPECT_GT(report.growth_ratio, 1e2);
}

// Known to fail: on this shell the sw continuation grows only by ~1.6e2
// between R = 2 and R = 16 along this ray.
TEST(ArcProbe, ShellSwGrowsAlongLowerRay) {
  const std::vector<double> radii = {2.0, 4.0, 8.0, 16.0};
  const auto report = arc_growth_probe(EigenfunctionKind::sw, TestFunction::smooth_bump(3.0),
                                       -kPi / 4.0, radii, kShell);
  for (std::size_t i = 1; i < report.magnitudes.size(); ++i) {
    EXPECT_GT(report.magnitudes[i], report.magnitudes[i - 1]);
  }
  EXPECT_GT(report.growth_ratio, 1e3);
}

Resonance broad_zero() {
  const auto zeros = find_resonances(JostBranch::plus, SearchRegion::make(3.5, 4.5, -0.5, -0.01), kShell);
  EXPECT_EQ(zeros.size(), 1u);
  return zeros.at(0);
}

TEST(GamowState, Invariants) {
  const auto state = GamowState::from_resonance(broad_zero(), kShell);
  EXPECT_LT(std::abs(state.coefficients().j4), 1e-10);
  const double gamma = state.growth_rate();
  EXPECT_NEAR(gamma, 0.25914987, 1e-7);
  const double at_b = std::abs(state(kShell.b()));
  for (double r = kShell.b(); r <= kShell.b() + 10.0; r += 0.5) {
    const double ratio = std::abs(state(r)) / (at_b * std::exp(gamma * (r - kShell.b())));
    EXPECT_GT(ratio, 0.5);
    EXPECT_LT(ratio, 2.0);
  }
}

TEST(GamowState, RejectsWrongZeros) {
  auto res = broad_zero();
  auto minus = res;
  minus.which = JostBranch::minus;
  EXPECT_THROW(GamowState::from_resonance(minus, kShell), InvalidArgument);
  auto upper = res;
  upper.k_pole = ComplexMomentum(std::conj(res.k_pole.value));
  EXPECT_THROW(GamowState::from_resonance(upper, kShell), InvalidArgument);
  auto off = res;
  off.k_pole = ComplexMomentum(res.k_pole.value + 0.05);
  EXPECT_THROW(GamowState::from_resonance(off, kShell), InvalidArgument);
}

TEST(GamowPair, ConvergesForFastDecay) {
  const auto state = GamowState::from_resonance(broad_zero(), kShell);
  const double gamma = state.growth_rate();
  const auto f = TestFunction::exp_decay(2.0 * gamma);
  const auto limits = uniform_limits(kShell.b() + 2.0, 2.0, 20);
  const auto report = gamow_pair(f, state, limits);
  EXPECT_EQ(report.verdict, PairingVerdict::converged);
  ASSERT_TRUE(report.expected_exponent.has_value());
  EXPECT_NEAR(*report.expected_exponent, -gamma, 1e-15);
  EXPECT_NEAR(report.measured_exponent, -gamma, 0.1 * gamma);
  ASSERT_TRUE(report.limit.has_value());

  // Oracle: composite Simpson on [0, b] plus the exterior tail in closed form.
  const auto& c = state.coefficients();
  const int n = 200000;
  const double h = kShell.b() / n;
  Complex inner = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    inner += w * state(r) * f(r);
  }
  inner *= h / 3.0;
  const Complex rate = kI * c.k.value - 2.0 * gamma;
  const Complex tail = -c.j3 * std::exp(rate * kShell.b()) / rate;
  EXPECT_LT(std::abs(*report.limit - (inner + tail)), 1e-8 * std::abs(inner + tail));
}

TEST(GamowPair, DivergesForSlowDecay) {
  const auto state = GamowState::from_resonance(broad_zero(), kShell);
  const double gamma = state.growth_rate();
  const auto limits = uniform_limits(kShell.b() + 2.0, 2.0, 20);
  const auto report = gamow_pair(TestFunction::exp_decay(0.5 * gamma), state, limits);
  EXPECT_EQ(report.verdict, PairingVerdict::diverged);
  EXPECT_FALSE(report.limit.has_value());
  EXPECT_NEAR(report.measured_exponent, 0.5 * gamma, 0.1 * 0.5 * gamma);
}

TEST(GamowPair, CompactSupportIsExact) {
  const auto state = GamowState::from_resonance(broad_zero(), kShell);
  const auto limits = uniform_limits(4.0, 2.0, 10);
  const auto report = gamow_pair(TestFunction::smooth_bump(3.0), state, limits);
  EXPECT_EQ(report.verdict, PairingVerdict::converged);
  for (std::size_t i = 1; i < report.partial.size(); ++i) {
    EXPECT_EQ(report.partial[i], report.partial[0]);
  }
  EXPECT_TRUE(std::isinf(report.measured_exponent));
  EXPECT_LT(report.measured_exponent, 0.0);
  ASSERT_TRUE(report.limit.has_value());
  EXPECT_EQ(*report.limit, report.partial.back());
}

TEST(GamowPair, Preconditions) {
  const auto state = GamowState::from_resonance(broad_zero(), kShell);
  const std::vector<double> two = {3.0, 5.0};
  EXPECT_THROW(gamow_pair(TestFunction::exp_decay(1.0), state, two), InvalidArgument);
  const std::vector<double> bad = {3.0, 5.0, 4.0};
  EXPECT_THROW(gamow_pair(TestFunction::exp_decay(1.0), state, bad), InvalidArgument);
  EXPECT_THROW(uniform_limits(2.0, 0.0, 5), InvalidArgument);
}

}  // namespace
}  // namespace shellres
