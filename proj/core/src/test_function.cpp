#include "shellres/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shellres/error.hpp"
#include "shellres/quadrature.hpp"

namespace shellres {
namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TestFunction::TestFunction(TestFunctionForm form, double parameter,
                           std::vector<double> coefficients)
    : form_(form), parameter_(parameter), coefficients_(std::move(coefficients)) {
  if (!(parameter_ > 0.0) || !std::isfinite(parameter_)) {
    throw InvalidArgument(std::string("test function: ") + to_string(form) +
                          " parameter must be positive and finite");
  }
  if (coefficients_.empty()) {
    throw InvalidArgument("test function: coefficient list must not be empty");
  }
  for (double c : coefficients_) {
    if (!std::isfinite(c)) {
      throw InvalidArgument("test function: coefficients must be finite");
    }
  }
}

TestFunction TestFunction::exp_decay(double rate, std::vector<double> coefficients) {
  return {TestFunctionForm::exp_decay, rate, std::move(coefficients)};
}

TestFunction TestFunction::gaussian(double width, std::vector<double> coefficients) {
  return {TestFunctionForm::gaussian, width, std::move(coefficients)};
}

TestFunction TestFunction::smooth_bump(double support,
                                       std::vector<double> coefficients) {
  return {TestFunctionForm::smooth_bump, support, std::move(coefficients)};
}

double TestFunction::polynomial(double r) const {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * r + *it;
  }
  return acc;
}

double TestFunction::envelope(double r) const {
  switch (form_) {
    case TestFunctionForm::exp_decay:
      return std::exp(-parameter_ * r);
    case TestFunctionForm::gaussian:
      return std::exp(-r * r / (2.0 * parameter_ * parameter_));
    case TestFunctionForm::smooth_bump: {
      const double s = r / parameter_;
      if (s <= 0.0 || s >= 1.0) return 0.0;
      return std::exp(-1.0 / (4.0 * s * (1.0 - s)));
    }
  }
  return 0.0;
}

double TestFunction::operator()(double r) const { return polynomial(r) * envelope(r); }

DecayClass TestFunction::decay_class() const {
  switch (form_) {
    case TestFunctionForm::exp_decay:
      return {DecayKind::exponential, parameter_, 0.0};
    case TestFunctionForm::gaussian:
      return {DecayKind::super_exponential, 0.0, 0.0};
    case TestFunctionForm::smooth_bump:
      return {DecayKind::compact, 0.0, parameter_};
  }
  return {DecayKind::compact, 0.0, 0.0};
}

bool TestFunction::is_zero() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(),
                     [](double c) { return c == 0.0; });
}

double TestFunction::norm_squared() const {
  const int n = static_cast<int>(coefficients_.size());
  switch (form_) {
    case TestFunctionForm::exp_decay: {
      // int r^m e^{-2 alpha r} dr = m! / (2 alpha)^{m+1}
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const int m = i + j;
          acc += coefficients_[i] * coefficients_[j] * factorial(m) /
                 std::pow(2.0 * parameter_, m + 1);
        }
      }
      return acc;
    }
    case TestFunctionForm::gaussian: {
      // int r^m e^{-r^2/sigma^2} dr = sigma^{m+1} Gamma((m+1)/2) / 2
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const int m = i + j;
          acc += coefficients_[i] * coefficients_[j] *
                 std::pow(parameter_, m + 1) * std::tgamma(0.5 * (m + 1)) / 2.0;
        }
      }
      return acc;
    }
    case TestFunctionForm::smooth_bump: {
      quadrature::Options opts;
      opts.abs_tol = 0.0;
      opts.rel_tol = 1e-14;
      opts.initial_panels = 16;
      const auto res = quadrature::integrate(
          [this](double r) { return std::complex<double>((*this)(r) * (*this)(r)); },
          0.0, parameter_, opts);
      return res.value.real();
    }
  }
  return 0.0;
}

TestFunction TestFunction::scaled(double factor) const {
  std::vector<double> c = coefficients_;
  for (double& x : c) x *= factor;
  return {form_, parameter_, std::move(c)};
}

double TestFunction::effective_extent(double growth_rate) const {
  const double g = std::max(growth_rate, 0.0);
  const double d = std::max(degree(), 0);
  switch (form_) {
    case TestFunctionForm::exp_decay: {
      const double net = parameter_ - g;
      if (net <= 0.0) return std::numeric_limits<double>::infinity();
      return (46.0 + 2.0 * d * std::log1p(d / net)) / net + d / net;
    }
    case TestFunctionForm::gaussian: {
      const double sigma = parameter_;
      return sigma * sigma * g + sigma * (std::sqrt(2.0 * 46.0) + 2.0 * std::sqrt(d + 1.0));
    }
    case TestFunctionForm::smooth_bump:
      return parameter_;
  }
  return parameter_;
}

std::string TestFunction::describe() const {
  std::ostringstream out;
  out << to_string(form_) << "(";
  switch (form_) {
    case TestFunctionForm::exp_decay: out << "rate="; break;
    case TestFunctionForm::gaussian: out << "width="; break;
    case TestFunctionForm::smooth_bump: out << "support="; break;
  }
  out << parameter_ << ", degree=" << degree() << ")";
  return out.str();
}

const char* to_string(TestFunctionForm form) {
  switch (form) {
    case TestFunctionForm::exp_decay: return "exp_decay";
    case TestFunctionForm::gaussian: return "gaussian";
    case TestFunctionForm::smooth_bump: return "smooth_bump";
  }
  return "unknown";
}

const char* to_string(DecayKind kind) {
  switch (kind) {
    case DecayKind::exponential: return "exponential";
    case DecayKind::super_exponential: return "super_exponential";
    case DecayKind::compact: return "compact";
  }
  return "unknown";
}

}  // namespace shellres
