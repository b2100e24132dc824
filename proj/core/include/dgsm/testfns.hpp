#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgsm/bounds.hpp"
#include "dgsm/model.hpp"

namespace dgsm {

/// Closed-form reference values. Uniform-measure fields are empty for
/// normal models and vice versa. gamma(i, m) is the closed-form lower-bound
/// family; m_star / lb2 / ub1 / ub2 are filled by complete().
struct AnalyticReference {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> first_order;
  std::vector<double> total;
  std::vector<double> morris_mu;
  std::vector<double> nu;

  // Uniform01 inputs.
  std::vector<double> zeta;
  std::vector<double> lb1;
  std::function<double(std::size_t, double)> gamma;
  std::vector<double> m_star;
  std::vector<double> lb2;
  std::vector<double> lb_star;
  std::vector<double> ub1;
  std::vector<double> ub2;

  // Normal inputs.
  std::vector<double> w_normal;
  std::vector<double> lb_normal;
  std::vector<double> ub_normal;

  /// Derives UB1 / UB2 / normal bounds from nu, zeta, w and D, and locates
  /// m* by maximizing gamma to tolerance 1e-10.
  void complete(std::span<const Distribution> inputs, const MStarOptions& search = {});
};

using ParamMap = std::map<std::string, std::vector<double>>;

struct TestFunction {
  std::string name;
  Model model;
  ParamMap params;
  std::optional<AnalyticReference> analytic;
};

/// g(x) = prod_i (|4 x_i - 2| + a_i) / (1 + a_i), a_i >= 0.
/// The derivative sign at x_i = 1/2 is taken as +1.
TestFunction make_g_function(std::vector<double> a, std::vector<Distribution> inputs = {});

/// f(x) = a(z) x_1 + b(z), z = (x_2, ..., x_d), with affine
/// a(z) = a_0 + sum_k a_k z_k and b(z) = b_0 + sum_k b_k z_k. The
/// coefficient vectors have length d. Analytic references cover Uniform01
/// and Normal inputs.
TestFunction make_linear(std::vector<double> a, std::vector<double> b,
                         std::vector<Distribution> inputs = {});

/// Hartmann-6 with the classical constants (see data/hartmann6.txt). No
/// closed-form reference.
TestFunction make_hartmann6(std::vector<Distribution> inputs = {});

/// Hartmann-6 with only `active` inputs (0-based) free; the rest are held at `fixed`.
TestFunction make_hartmann_restricted(std::vector<std::size_t> active, double fixed = 0.5);

/// f(x) = prod_i (1 + c_i (x_i - 1/2)^2): smooth product with closed forms.
TestFunction make_smooth_product(std::vector<double> c);

/// Registry of named test-function factories.
class Registry {
public:
  using Factory = std::function<TestFunction(const ParamMap&, std::span<const Distribution>)>;

  struct Entry {
    std::string name;
    std::string dimension;   // human-readable, e.g. "len(a)" or "6"
    std::string parameters;  // parameter schema, e.g. "a: array of d reals >= 0"
    bool analytic = false;
    Factory factory;
  };

  static Registry builtin();

  void add(Entry entry);
  const Entry* find(const std::string& name) const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// Throws unknown_function when the name is not registered.
  TestFunction make(const std::string& name, const ParamMap& params,
                    std::span<const Distribution> inputs = {}) const;

private:
  std::vector<Entry> entries_;
};

}  // namespace dgsm
