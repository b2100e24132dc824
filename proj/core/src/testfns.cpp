#include "dgsm/testfns.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <string_view>

#include "dgsm/error.hpp"
#include "dgsm/numerics.hpp"

namespace dgsm {
namespace detail {
extern const std::string_view kHartmann6Constants;
}

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

std::vector<Distribution> default_inputs(std::vector<Distribution> inputs, std::size_t d) {
  if (inputs.empty()) inputs.assign(d, Distribution::uniform01());
  require(inputs.size() == d, ErrorCode::dimension_mismatch,
          "expected " + std::to_string(d) + " input distributions, got " +
              std::to_string(inputs.size()));
  return inputs;
}

bool all_of_kind(const std::vector<Distribution>& inputs, DistributionKind kind) {
  for (const auto& in : inputs) {
    if (in.kind != kind) return false;
  }
  return true;
}

// E|Y| for Y ~ N(m, s^2).
double folded_normal_mean(double m, double s) {
  if (s == 0.0) return std::abs(m);
  return s * std::sqrt(2.0 / std::numbers::pi) * std::exp(-m * m / (2.0 * s * s)) +
         m * (1.0 - 2.0 * normal_cdf(-m / s));
}

// E|alpha x + beta| for x ~ U(0, 1).
double abs_affine_uniform_mean(double alpha, double beta) {
  if (alpha == 0.0) return std::abs(beta);
  const double root = -beta / alpha;
  if (root <= 0.0 || root >= 1.0) return std::abs(alpha * 0.5 + beta);
  return std::abs(alpha) * (root * root + (1.0 - root) * (1.0 - root)) / 2.0;
}

struct HartmannConstants {
  std::array<double, 4> c{};
  std::array<std::array<double, 6>, 4> alpha{};
  std::array<std::array<double, 6>, 4> p{};
};

const HartmannConstants& hartmann_constants() {
  static const HartmannConstants constants = [] {
    HartmannConstants h;
    std::istringstream in{std::string(detail::kHartmann6Constants)};
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      require(row < 4, ErrorCode::invalid_argument, "Hartmann-6 data has more than 4 rows");
      std::istringstream fields(line);
      fields >> h.c[row];
      for (auto& a : h.alpha[row]) fields >> a;
      for (auto& p : h.p[row]) fields >> p;
      require(static_cast<bool>(fields), ErrorCode::invalid_argument, "malformed Hartmann-6 row");
      ++row;
    }
    require(row == 4, ErrorCode::invalid_argument, "Hartmann-6 data needs 4 rows");
    return h;
  }();
  return constants;
}

double hartmann_value(std::span<const double> x) {
  const auto& h = hartmann_constants();
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      const double t = x[j] - h.p[i][j];
      inner += h.alpha[i][j] * t * t;
    }
    sum += h.c[i] * std::exp(-inner);
  }
  return -sum;
}

void hartmann_gradient(std::span<const double> x, std::span<double> g) {
  const auto& h = hartmann_constants();
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      const double t = x[j] - h.p[i][j];
      inner += h.alpha[i][j] * t * t;
    }
    const double e = h.c[i] * std::exp(-inner);
    for (std::size_t j = 0; j < 6; ++j) g[j] += 2.0 * h.alpha[i][j] * (x[j] - h.p[i][j]) * e;
  }
}

}  // namespace

void AnalyticReference::complete(std::span<const Distribution> inputs, const MStarOptions& search) {
  const std::size_t d = inputs.size();
  require(variance > 0.0, ErrorCode::constant_model, "analytic variance must be positive");
  bool uniform = true;
  for (const auto& in : inputs) uniform = uniform && in.kind == DistributionKind::uniform01;

  if (uniform) {
    ub1.assign(d, 0.0);
    ub2.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      ub1[i] = nu[i] / (kPi2 * variance);
      ub2[i] = zeta[i] / variance;
    }
    if (gamma) {
      MStarOptions fine = search;
      fine.coarse_points = std::max<std::size_t>(search.coarse_points, 512);
      fine.tolerance = 1e-10;
      m_star.assign(d, 0.0);
      lb2.assign(d, 0.0);
      for (std::size_t i = 0; i < d; ++i) {
        const GammaMaximum best =
            maximize_gamma_curve([&](double m) { return gamma(i, m); }, fine);
        m_star[i] = best.m_star.value_or(std::numeric_limits<double>::quiet_NaN());
        lb2[i] = best.lb2;
      }
      if (lb1.size() == d) lb_star = dgsm::lb_star(lb1, lb2);
    }
  } else {
    lb_normal.assign(d, 0.0);
    ub_normal.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      const double s2 = inputs[i].sigma * inputs[i].sigma;
      lb_normal[i] = s2 * w_normal[i] * w_normal[i] / variance;
      ub_normal[i] = s2 * nu[i] / variance;
    }
  }
}

TestFunction make_g_function(std::vector<double> a, std::vector<Distribution> inputs) {
  require(!a.empty(), ErrorCode::invalid_argument, "g-function needs at least one coefficient");
  for (double ai : a) {
    require(std::isfinite(ai) && ai >= 0.0, ErrorCode::invalid_argument,
            "g-function coefficients must be non-negative");
  }
  const std::size_t d = a.size();
  inputs = default_inputs(std::move(inputs), d);
  auto coeffs = std::make_shared<const std::vector<double>>(a);

  Evaluator f = [coeffs](std::span<const double> x) {
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      prod *= (std::abs(4.0 * x[i] - 2.0) + (*coeffs)[i]) / (1.0 + (*coeffs)[i]);
    }
    return prod;
  };
  GradientFn grad = [coeffs](std::span<const double> x, std::span<double> g) {
    const std::size_t n = x.size();
    std::vector<double> factor(n);
    for (std::size_t i = 0; i < n; ++i) {
      factor[i] = (std::abs(4.0 * x[i] - 2.0) + (*coeffs)[i]) / (1.0 + (*coeffs)[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double others = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) others *= factor[j];
      }
      const double sign = (4.0 * x[i] - 2.0) >= 0.0 ? 1.0 : -1.0;
      g[i] = 4.0 * sign / (1.0 + (*coeffs)[i]) * others;
    }
  };

  TestFunction tf{"g-function", Model("g-function", d, f, grad, inputs), {{"a", a}}, std::nullopt};
  if (!all_of_kind(inputs, DistributionKind::uniform01)) return tf;

  AnalyticReference ref;
  std::vector<double> t(d);
  double prod = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    t[j] = 1.0 + (1.0 / 3.0) / ((1.0 + a[j]) * (1.0 + a[j]));
    prod *= t[j];
  }
  // Products over j != i, formed directly so large-a terms keep full precision.
  auto others = [&](std::size_t i) {
    double p = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (j != i) p *= t[j];
    }
    return p;
  };
  const double D = prod - 1.0;
  ref.mean = 1.0;
  ref.variance = D;
  for (std::size_t i = 0; i < d; ++i) {
    const double w2 = (1.0 + a[i]) * (1.0 + a[i]);
    ref.first_order.push_back((1.0 / 3.0) / (w2 * D));
    ref.total.push_back((1.0 / 3.0) / w2 * others(i) / D);
    ref.morris_mu.push_back(4.0 / (1.0 + a[i]));
    ref.nu.push_back(16.0 * others(i) / w2);
    ref.zeta.push_back(4.0 * others(i) / (3.0 * w2));
    ref.lb1.push_back(0.0);
  }
  ref.gamma = [a, D](std::size_t i, double m) {
    const double bracket = 1.0 - 4.0 * (1.0 - std::pow(0.5, m + 1.0)) / (m + 2.0);
    return (2.0 * m + 1.0) * bracket * bracket /
           ((1.0 + a[i]) * (1.0 + a[i]) * (m + 1.0) * (m + 1.0) * D);
  };
  ref.complete(inputs);
  tf.analytic = std::move(ref);
  return tf;
}

TestFunction make_linear(std::vector<double> a, std::vector<double> b,
                         std::vector<Distribution> inputs) {
  require(!a.empty(), ErrorCode::invalid_argument, "linear model needs coefficients");
  require(a.size() == b.size(), ErrorCode::dimension_mismatch,
          "linear model needs a and b of equal length");
  for (std::size_t k = 0; k < a.size(); ++k) {
    require(std::isfinite(a[k]) && std::isfinite(b[k]), ErrorCode::invalid_argument,
            "linear model coefficients must be finite");
  }
  const std::size_t d = a.size();
  inputs = default_inputs(std::move(inputs), d);
  auto ca = std::make_shared<const std::vector<double>>(a);
  auto cb = std::make_shared<const std::vector<double>>(b);

  Evaluator f = [ca, cb](std::span<const double> x) {
    double az = (*ca)[0], bz = (*cb)[0];
    for (std::size_t k = 1; k < x.size(); ++k) {
      az += (*ca)[k] * x[k];
      bz += (*cb)[k] * x[k];
    }
    return az * x[0] + bz;
  };
  GradientFn grad = [ca, cb](std::span<const double> x, std::span<double> g) {
    double az = (*ca)[0];
    for (std::size_t k = 1; k < x.size(); ++k) az += (*ca)[k] * x[k];
    g[0] = az;
    for (std::size_t k = 1; k < x.size(); ++k) g[k] = (*ca)[k] * x[0] + (*cb)[k];
  };

  TestFunction tf{"linear", Model("linear", d, f, grad, inputs), {{"a", a}, {"b", b}},
                  std::nullopt};

  const bool uniform = all_of_kind(inputs, DistributionKind::uniform01);
  const bool normal = all_of_kind(inputs, DistributionKind::normal);
  if (!uniform && !normal) return tf;

  // Moments of each input: uniform on [0,1] or the given normal.
  std::vector<double> mu(d), var(d);
  for (std::size_t k = 0; k < d; ++k) {
    mu[k] = uniform ? 0.5 : inputs[k].mean;
    var[k] = uniform ? 1.0 / 12.0 : inputs[k].sigma * inputs[k].sigma;
  }

  // Centered expansion f = const + abar*dx + sum c_k dz_k + sum a_k dx dz_k.
  double abar = a[0], bbar = b[0];
  for (std::size_t k = 1; k < d; ++k) {
    abar += a[k] * mu[k];
    bbar += b[k] * mu[k];
  }
  std::vector<double> c(d, 0.0);  // mean partial derivative w.r.t. z_k
  for (std::size_t k = 1; k < d; ++k) c[k] = a[k] * mu[0] + b[k];

  std::vector<double> main(d), inter(d, 0.0);
  main[0] = abar * abar * var[0];
  double D = main[0];
  for (std::size_t k = 1; k < d; ++k) {
    main[k] = c[k] * c[k] * var[k];
    inter[k] = a[k] * a[k] * var[0] * var[k];
    D += main[k] + inter[k];
  }
  if (!(D > 0.0)) return tf;

  AnalyticReference ref;
  ref.mean = abar * mu[0] + bbar;
  ref.variance = D;
  double inter_sum = 0.0;
  double sigma_a2 = 0.0;  // variance of a(z)
  for (std::size_t k = 1; k < d; ++k) {
    inter_sum += inter[k];
    sigma_a2 += a[k] * a[k] * var[k];
  }
  ref.first_order.push_back(main[0] / D);
  ref.total.push_back((main[0] + inter_sum) / D);
  ref.nu.push_back(abar * abar + sigma_a2);
  for (std::size_t k = 1; k < d; ++k) {
    ref.first_order.push_back(main[k] / D);
    ref.total.push_back((main[k] + inter[k]) / D);
    ref.nu.push_back(c[k] * c[k] + a[k] * a[k] * var[0]);
  }

  if (uniform) {
    // E|a(z)| has a simple closed form only when a(z) has one sign or d <= 2.
    double a_min = a[0], a_max = a[0];
    for (std::size_t k = 1; k < d; ++k) {
      a_min += std::min(0.0, a[k]);
      a_max += std::max(0.0, a[k]);
    }
    const bool mu_known = a_min >= 0.0 || a_max <= 0.0 || d <= 2;
    if (mu_known) {
      ref.morris_mu.push_back(d == 2 ? abs_affine_uniform_mean(a[1], a[0]) : std::abs(abar));
      for (std::size_t k = 1; k < d; ++k) ref.morris_mu.push_back(abs_affine_uniform_mean(a[k], b[k]));
    }
    for (std::size_t i = 0; i < d; ++i) {
      ref.zeta.push_back(ref.nu[i] / 12.0);
      ref.lb1.push_back(0.0);
    }
    std::vector<double> slope_mean = c;
    slope_mean[0] = abar;
    ref.gamma = [slope_mean, D](std::size_t i, double m) {
      const double s = slope_mean[i];
      return (2.0 * m + 1.0) * m * m * s * s /
             (4.0 * (m + 2.0) * (m + 2.0) * (m + 1.0) * (m + 1.0) * D);
    };
  } else {
    ref.morris_mu.push_back(folded_normal_mean(abar, std::sqrt(sigma_a2)));
    ref.w_normal.push_back(abar);
    for (std::size_t k = 1; k < d; ++k) {
      ref.morris_mu.push_back(folded_normal_mean(c[k], std::abs(a[k]) * std::sqrt(var[0])));
      ref.w_normal.push_back(c[k]);
    }
  }
  ref.complete(inputs);
  tf.analytic = std::move(ref);
  return tf;
}

TestFunction make_hartmann6(std::vector<Distribution> inputs) {
  hartmann_constants();
  inputs = default_inputs(std::move(inputs), 6);
  return {"hartmann6", Model("hartmann6", 6, hartmann_value, hartmann_gradient, inputs), {},
          std::nullopt};
}

TestFunction make_hartmann_restricted(std::vector<std::size_t> active, double fixed) {
  require(!active.empty() && active.size() <= 6, ErrorCode::invalid_argument,
          "restricted Hartmann needs 1..6 active inputs");
  for (auto j : active) require(j < 6, ErrorCode::invalid_argument, "Hartmann input index out of range");
  require(fixed >= 0.0 && fixed <= 1.0, ErrorCode::invalid_argument, "fixed value must be in [0, 1]");
  auto idx = std::make_shared<const std::vector<std::size_t>>(active);

  auto embed = [idx, fixed](std::span<const double> x) {
    std::array<double, 6> full;
    full.fill(fixed);
    for (std::size_t k = 0; k < idx->size(); ++k) full[(*idx)[k]] = x[k];
    return full;
  };
  Evaluator f = [embed](std::span<const double> x) { return hartmann_value(embed(x)); };
  GradientFn grad = [embed, idx](std::span<const double> x, std::span<double> g) {
    std::array<double, 6> full_grad{};
    hartmann_gradient(embed(x), full_grad);
    for (std::size_t k = 0; k < idx->size(); ++k) g[k] = full_grad[(*idx)[k]];
  };
  ParamMap params;
  for (auto j : active) params["active"].push_back(static_cast<double>(j + 1));
  params["fixed"] = {fixed};
  return {"hartmann-restricted", Model("hartmann-restricted", active.size(), f, grad), params,
          std::nullopt};
}

TestFunction make_smooth_product(std::vector<double> c) {
  require(!c.empty(), ErrorCode::invalid_argument, "smooth product needs coefficients");
  for (double ci : c) {
    require(std::isfinite(ci) && ci > -4.0, ErrorCode::invalid_argument,
            "smooth product coefficients must exceed -4 so every factor stays positive");
  }
  const std::size_t d = c.size();
  auto coeffs = std::make_shared<const std::vector<double>>(c);
  Evaluator f = [coeffs](std::span<const double> x) {
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = x[i] - 0.5;
      prod *= 1.0 + (*coeffs)[i] * t * t;
    }
    return prod;
  };
  GradientFn grad = [coeffs](std::span<const double> x, std::span<double> g) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
      double others = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double t = x[j] - 0.5;
        others *= 1.0 + (*coeffs)[j] * t * t;
      }
      g[i] = 2.0 * (*coeffs)[i] * (x[i] - 0.5) * others;
    }
  };

  TestFunction tf{"smooth-product", Model("smooth-product", d, f, grad), {{"c", c}}, std::nullopt};

  std::vector<double> mean(d), second(d), var(d);
  for (std::size_t i = 0; i < d; ++i) {
    mean[i] = 1.0 + c[i] / 12.0;
    second[i] = 1.0 + c[i] / 6.0 + c[i] * c[i] / 80.0;
    var[i] = c[i] * c[i] / 180.0;
  }
  auto prod_except = [&](const std::vector<double>& v, std::size_t i) {
    double p = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (j != i) p *= v[j];
    }
    return p;
  };
  double all_second = 1.0, all_mean2 = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    all_second *= second[i];
    all_mean2 *= mean[i] * mean[i];
  }
  AnalyticReference ref;
  ref.variance = all_second - all_mean2;
  if (!(ref.variance > 0.0)) return tf;
  ref.mean = std::sqrt(all_mean2);
  std::vector<double> mean_sq(d);
  for (std::size_t i = 0; i < d; ++i) mean_sq[i] = mean[i] * mean[i];
  for (std::size_t i = 0; i < d; ++i) {
    ref.first_order.push_back(var[i] * prod_except(mean_sq, i) / ref.variance);
    ref.total.push_back(var[i] * prod_except(second, i) / ref.variance);
    ref.morris_mu.push_back(std::abs(c[i]) / 2.0 * prod_except(mean, i));
    ref.nu.push_back(c[i] * c[i] / 3.0 * prod_except(second, i));
    ref.zeta.push_back(c[i] * c[i] / 60.0 * prod_except(second, i));
    ref.lb1.push_back(0.0);
  }
  const double D = ref.variance;
  ref.gamma = [c, mean, D](std::size_t i, double m) {
    double others = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j != i) others *= mean[j];
    }
    const double endpoint = c[i] / 6.0 * others;
    const double w = 2.0 * c[i] * (1.0 / (m + 3.0) - 0.5 / (m + 2.0)) * others;
    const double diff = endpoint - w;
    return (2.0 * m + 1.0) * diff * diff / ((m + 1.0) * (m + 1.0) * D);
  };
  ref.complete(tf.model.inputs());
  tf.analytic = std::move(ref);
  return tf;
}

Registry Registry::builtin() {
  Registry r;
  r.add({"g-function", "len(a)",
         "a: array of d reals >= 0 (default [0,1,4.5,9,99,99,99,99])", true,
         [](const ParamMap& p, std::span<const Distribution> in) {
           for (const auto& [key, _] : p) {
             require(key == "a", ErrorCode::invalid_argument, "g-function has no parameter '" + key + "'");
           }
           auto it = p.find("a");
           std::vector<double> a = it != p.end() ? it->second
                                                 : std::vector<double>{0, 1, 4.5, 9, 99, 99, 99, 99};
           return make_g_function(a, {in.begin(), in.end()});
         }});
  r.add({"linear", "len(a)",
         "a, b: arrays of d reals; f = (a0 + sum_k a_k x_{k+1}) x_1 + (b0 + sum_k b_k x_{k+1}) "
         "(default a=[1], b=[0])",
         true,
         [](const ParamMap& p, std::span<const Distribution> in) {
           for (const auto& [key, _] : p) {
             require(key == "a" || key == "b", ErrorCode::invalid_argument,
                     "linear has no parameter '" + key + "'");
           }
           auto ia = p.find("a");
           auto ib = p.find("b");
           std::vector<double> a = ia != p.end() ? ia->second : std::vector<double>{1.0};
           std::vector<double> b = ib != p.end() ? ib->second : std::vector<double>(a.size(), 0.0);
           return make_linear(a, b, {in.begin(), in.end()});
         }});
  r.add({"hartmann6", "6", "none (classical constants)", false,
         [](const ParamMap& p, std::span<const Distribution> in) {
           require(p.empty(), ErrorCode::invalid_argument, "hartmann6 takes no parameters");
           return make_hartmann6({in.begin(), in.end()});
         }});
  return r;
}

void Registry::add(Entry entry) {
  require(!entry.name.empty(), ErrorCode::invalid_argument, "registry entries need a name");
  require(static_cast<bool>(entry.factory), ErrorCode::invalid_argument,
          "registry entries need a factory");
  require(find(entry.name) == nullptr, ErrorCode::invalid_argument,
          "function '" + entry.name + "' is already registered");
  entries_.push_back(std::move(entry));
}

const Registry::Entry* Registry::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

TestFunction Registry::make(const std::string& name, const ParamMap& params,
                            std::span<const Distribution> inputs) const {
  const Entry* entry = find(name);
  if (!entry) fail(ErrorCode::unknown_function, "no function named '" + name + "'");
  return entry->factory(params, inputs);
}

}  // namespace dgsm
