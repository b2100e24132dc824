// Acceptance runner: one PASS/FAIL line per criterion, detail lines for
// every miss. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dgsm/bench.hpp"
#include "dgsm/bounds.hpp"
#include "dgsm/dgsm.hpp"
#include "dgsm/testfns.hpp"
#include "dgsm/variance.hpp"
#include "dgsm_app/app.hpp"

using namespace dgsm;

namespace {

const std::vector<double> kTableA = {0, 1, 4.5, 9, 99, 99, 99, 99};
constexpr std::uint64_t kSeed = 20130527;

class Criterion {
public:
  explicit Criterion(std::string id) : id_(std::move(id)) {}

  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++misses_;
      details_.push_back(what);
    }
  }
  void note(const std::string& what) { notes_.push_back(what); }

  bool finish(const std::string& summary) const {
    for (const auto& d : details_) std::cout << "    miss: " << d << '\n';
    for (const auto& n : notes_) std::cout << "    note: " << n << '\n';
    std::cout << (misses_ == 0 ? "PASS " : "FAIL ") << id_ << "  " << summary << "  ("
              << checks_ - misses_ << "/" << checks_ << " checks)" << std::endl;
    return misses_ == 0;
  }

private:
  std::string id_;
  std::size_t checks_ = 0, misses_ = 0;
  std::vector<std::string> details_, notes_;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Rounds x to the number of decimals written in `printed` and compares.
bool matches_printed(double x, const std::string& printed) {
  const auto dot = printed.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(printed.size() - dot - 1);
  const double scale = std::pow(10.0, decimals);
  return std::llround(x * scale) == std::llround(std::stod(printed) * scale);
}

double sd_error(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Every report produced below is also fed to the invariant checks.
std::vector<BoundsReport> g_seen;

const BoundsReport& keep(BoundsReport r) {
  g_seen.push_back(std::move(r));
  return g_seen.back();
}

struct PrintedRow {
  const char* name;
  std::vector<std::string> cells;
};

bool ac1() {
  Criterion c("AC1");
  const TestFunction fn = make_g_function(kTableA);
  const auto& ref = *fn.analytic;
  // Columns x1..x4 and the shared x5..x8 column.
  const std::vector<PrintedRow> table = {
      {"LB*", {"0.166", "0.0416", "0.00549", "0.00166", "0.000017"}},
      {"S", {"0.716", "0.179", "0.0237", "0.00720", "0.0000716"}},
      {"S_tot", {"0.788", "0.242", "0.0343", "0.0105", "0.000105"}},
      {"UB1", {"3.828", "1.178", "0.167", "0.0509", "0.000501"}},
      {"UB2", {"3.149", "0.969", "0.137", "0.0418", "0.00042"}}};
  auto analytic = [&](const std::string& row, std::size_t i) {
    if (row == "LB*") return ref.lb_star[i];
    if (row == "S") return ref.first_order[i];
    if (row == "S_tot") return ref.total[i];
    if (row == "UB1") return ref.ub1[i];
    return ref.ub2[i];
  };
  for (const auto& row : table) {
    for (std::size_t col = 0; col < 5; ++col) {
      const double v = analytic(row.name, col);
      c.expect(matches_printed(v, row.cells[col]),
               fmt("analytic %s_%zu = %.6g, printed %s", row.name, col + 1, v, row.cells[col].c_str()));
    }
    for (std::size_t i = 5; i < 8; ++i) {
      c.expect(analytic(row.name, i) == analytic(row.name, 4), fmt("analytic %s_%zu differs from x5", row.name, i + 1));
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  const auto r = keep(assemble_report(fn.model, make_plan(fn.model, 1u << 14, std::nullopt, kSeed)));
  const double elapsed = seconds_since(t0);
  for (const auto& row : table) {
    for (std::size_t i = 0; i < 8; ++i) {
      const auto& v = r.variables[i];
      double est = 0.0;
      const std::string name = row.name;
      if (name == "LB*") est = v.lb_star.value_or(NAN);
      else if (name == "S") est = v.s_first;
      else if (name == "S_tot") est = v.s_total;
      else if (name == "UB1") est = v.ub1.value_or(NAN);
      else est = v.ub2.value_or(NAN);
      const double printed = std::stod(row.cells[std::min<std::size_t>(i, 4)]);
      if (i < 4) {
        c.expect(std::abs(est - printed) <= 0.02 * std::abs(printed),
                 fmt("numeric %s_%zu = %.6g vs %.6g (> 2%%)", row.name, i + 1, est, printed));
      } else {
        c.expect(std::abs(est - printed) <= 5e-5,
                 fmt("numeric %s_%zu = %.6g vs %.6g (> 5e-5)", row.name, i + 1, est, printed));
      }
    }
  }
  c.expect(elapsed < 30.0, fmt("numeric pipeline took %.2f s", elapsed));
  return c.finish(fmt("g-function a=[0,1,4.5,9,99,99,99,99]: analytic at printed precision, numeric N=2^14 in %.2f s", elapsed));
}

bool ac2() {
  Criterion c("AC2");
  const std::vector<std::vector<double>> cases = {{0.0}, {0.0, 1.0}, kTableA};
  double lo = 1e300, hi = -1e300;
  for (const auto& a : cases) {
    const TestFunction fn = make_g_function(a);
    const auto r = keep(assemble_report(fn.model, make_plan(fn.model, 1u << 14, std::nullopt, kSeed)));
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double exact = fn.analytic->m_star[i];
      const double est = r.variables[i].m_star.value_or(NAN);
      for (double m : {exact, est}) {
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
      c.expect(std::abs(exact - 9.64) <= 0.05, fmt("analytic m*_%zu = %.4f (d=%zu)", i + 1, exact, a.size()));
      c.expect(std::abs(est - 9.64) <= 0.05, fmt("numeric m*_%zu = %.4f (d=%zu)", i + 1, est, a.size()));
    }
  }
  c.expect(hi - lo <= 0.05, fmt("m* spread across a-vectors %.4f", hi - lo));

  const TestFunction lin = make_linear({1.0}, {0.0});
  const double exact = lin.analytic->m_star[0];
  const auto r = keep(assemble_report(lin.model, make_plan(lin.model, 1u << 14, std::nullopt, kSeed)));
  const double est = r.variables[0].m_star.value_or(NAN);
  c.expect(std::abs(exact - 3.745) <= 0.01, fmt("linear analytic m* = %.4f", exact));
  c.expect(std::abs(est - 3.745) <= 0.01, fmt("linear numeric m* = %.4f", est));
  return c.finish(fmt("g-function m* in [%.4f, %.4f]; linear m* = %.4f (numeric %.4f)", lo, hi, exact, est));
}

bool ac3() {
  Criterion c("AC3");
  std::vector<std::vector<double>> cases = {kTableA, {0.0}, {0.0, 1.0}};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.0, 10.0);
  for (int k = 0; k < 5; ++k) {
    std::vector<double> a(2 + k);
    for (auto& x : a) x = ua(rng);
    cases.push_back(a);
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double worst = 0.0;
  for (const auto& a : cases) {
    const auto ref = *make_g_function(a).analytic;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double e1 = std::abs(ref.total[i] / ref.ub1[i] - pi2 / 48.0);
      const double e2 = std::abs(ref.total[i] / ref.ub2[i] - 0.25);
      const double e3 = std::abs(ref.ub2[i] / ref.ub1[i] - pi2 / 12.0);
      worst = std::max({worst, e1, e2, e3});
      c.expect(e1 <= 1e-9 && e2 <= 1e-9 && e3 <= 1e-9, fmt("ratio error %.3g/%.3g/%.3g at i=%zu", e1, e2, e3, i));
    }
  }
  return c.finish(fmt("g-function ratios S_tot/UB1, S_tot/UB2, UB2/UB1; worst error %.2e", worst));
}

bool ac4() {
  Criterion c("AC4");
  const TestFunction fns[] = {make_g_function(kTableA), make_g_function({0.0, 1.0}), make_linear({1.0}, {0.0}),
                              make_linear({0.5, 1.0, -2.0}, {1.0, 0.3, 0.7})};
  double worst = 0.0;
  for (const auto& fn : fns) {
    const auto r = keep(assemble_report(fn.model, make_plan(fn.model, 1u << 14, std::nullopt, kSeed)));
    for (std::size_t i = 0; i < r.variables.size(); ++i) {
      const double v = r.variables[i].lb1.value_or(NAN);
      worst = std::max(worst, std::abs(v));
      c.expect(std::abs(v) < 1e-3, fmt("%s LB1_%zu = %.3g", fn.name.c_str(), i + 1, v));
    }
  }
  return c.finish(fmt("numeric LB1 at N=2^14 for g-function and linear; max |LB1| = %.2e", worst));
}

bool ac5() {
  Criterion c("AC5");
  const TestFunction fn = make_hartmann6();
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = keep(assemble_report(fn.model, make_plan(fn.model, 1u << 15, std::nullopt, kSeed)));
  const double elapsed = seconds_since(t0);
  struct Row {
    const char* name;
    double tol;
    std::vector<double> printed;
    std::function<double(const VariableReport&)> get;
  };
  const std::vector<Row> rows = {
      {"S", 0.01, {0.115, 0.00699, 0.00715, 0.0888, 0.109, 0.0139}, [](const VariableReport& v) { return v.s_first; }},
      {"S_tot", 0.02, {0.344, 0.398, 0.0515, 0.381, 0.297, 0.482}, [](const VariableReport& v) { return v.s_total; }},
      {"UB1", 0.03, {1.089, 0.540, 0.196, 1.088, 1.073, 1.046}, [](const VariableReport& v) { return *v.ub1; }},
      {"UB2", 0.03, {1.051, 0.550, 0.150, 0.959, 0.932, 0.899}, [](const VariableReport& v) { return *v.ub2; }},
      {"LB1", 0.005, {0.0044, 0.0080, 0.0009, 0.0029, 0.0014, 0.0357}, [](const VariableReport& v) { return *v.lb1; }},
      {"LB2", 0.005, {0.0515, 0.0013, 0.0011, 0.0418, 0.0390, 0.0009}, [](const VariableReport& v) { return *v.lb2; }},
      {"m*", 0.5, {4.6, 10.2, 17.0, 5.5, 3.6, 19.9}, [](const VariableReport& v) { return v.m_star.value_or(NAN); }}};
  bool s_row_missed = false;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < 6; ++i) {
      const double est = row.get(r.variables[i]);
      const bool ok = std::abs(est - row.printed[i]) <= row.tol;
      if (!ok && std::string(row.name) == "S") s_row_missed = true;
      c.expect(ok, fmt("%s_%zu = %.5g vs printed %.5g (tol %g)", row.name, i + 1, est, row.printed[i], row.tol));
    }
  }
  if (s_row_missed) {
    c.note("constants: standard Hartmann-6 (c, alpha, P) listing; exact separable quadrature of the first-order "
           "indices with these constants gives S = 0.1049 0.0021 0.0068 0.0810 0.1054 0.0081, so the printed S row "
           "is not reachable by a consistent estimator");
  }
  c.expect(elapsed < 60.0, fmt("pipeline took %.2f s", elapsed));
  return c.finish(fmt("Hartmann-6 at N=2^15 in %.2f s", elapsed));
}

bool ac6() {
  Criterion c("AC6");
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> ud(2, 8);
  std::uniform_real_distribution<double> ua(0.0, 10.0);
  constexpr std::size_t K = 8;
  constexpr std::size_t N = 1u << 12;
  std::size_t analytic_checks = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(static_cast<std::size_t>(ud(rng)));
    for (auto& x : a) x = ua(rng);
    const TestFunction fn = make_g_function(a);
    const auto& ref = *fn.analytic;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ++analytic_checks;
      c.expect(ref.lb_star[i] <= ref.total[i] && ref.total[i] <= std::min(ref.ub1[i], ref.ub2[i]),
               fmt("trial %d analytic sandwich broken at i=%zu", trial, i + 1));
    }
    const auto reps = replicate_reports(fn.model, N, K, kSeed + static_cast<std::uint64_t>(trial));
    for (const auto& r : reps) g_seen.push_back(r);
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::vector<double> lb, st, u1, u2;
      for (const auto& r : reps) {
        lb.push_back(*r.variables[i].lb_star);
        st.push_back(r.variables[i].s_total);
        u1.push_back(*r.variables[i].ub1);
        u2.push_back(*r.variables[i].ub2);
      }
      auto below = [&](const std::vector<double>& x, const std::vector<double>& y, const char* what) {
        const double se = std::hypot(sd_error(x), sd_error(y));
        c.expect(mean_of(x) <= mean_of(y) + 3.0 * se,
                 fmt("trial %d i=%zu %s: %.5g > %.5g + 3*%.2g", trial, i + 1, what, mean_of(x), mean_of(y), se));
      };
      below(lb, st, "LB* <= S_tot");
      below(st, u1, "S_tot <= UB1");
      below(st, u2, "S_tot <= UB2");
    }
  }
  return c.finish(fmt("20 random g-functions: %zu analytic sandwiches, numeric ordering within 3 SE (K=%zu, N=2^12)",
                      analytic_checks, K));
}

bool ac7() {
  Criterion c("AC7");
  const TestFunction fns[] = {make_linear({0.5, 1.0, -2.0}, {1.0, 0.3, 0.7}), make_smooth_product({2.0, -1.0, 0.5}),
                              make_hartmann_restricted({0, 3, 5})};
  double worst = 0.0;
  auto agree = [&](const std::string& what, double est, double exact) {
    // Absolute for quantities below one, relative above.
    const double err = std::abs(est - exact) / std::max(1.0, std::abs(exact));
    worst = std::max(worst, err);
    c.expect(err <= 5e-3, fmt("%s: %.6g vs oracle %.6g", what.c_str(), est, exact));
  };
  for (const auto& fn : fns) {
    const auto r = keep(assemble_report(fn.model, make_plan(fn.model, 1u << 14, std::nullopt, kSeed)));
    const auto orc = oracle_indices(fn.model, 24);
    const auto dg = oracle_dgsm(fn.model, 24, 2, {});
    agree(fn.name + " D", r.variance, orc.variance);
    for (std::size_t i = 0; i < r.variables.size(); ++i) {
      const std::string tag = fn.name + " x" + std::to_string(i + 1);
      agree(tag + " S_tot", r.variables[i].s_total, orc.total[i]);
      agree(tag + " nu", r.variables[i].nu, dg.nu[i]);
      agree(tag + " zeta", r.variables[i].zeta.value_or(NAN), dg.zeta[i]);
    }
  }
  return c.finish(fmt("QMC N=2^14 vs tensor quadrature for three d=3 models; worst scaled error %.2e", worst));
}

bool ac8() {
  Criterion c("AC8");
  const TestFunction fns[] = {make_g_function(kTableA), make_hartmann6(), make_linear({1.0, 2.0}, {0.0, 1.0})};
  for (const auto& fn : fns) {
    for (std::size_t n : {std::size_t{256}, std::size_t{1u << 14}}) {
      const auto r = keep(assemble_report(fn.model, make_plan(fn.model, n, std::nullopt, kSeed)));
      const std::uint64_t d = fn.model.dimension();
      const auto& l = r.ledger;
      c.expect(l.n_f_lb == n * (3 * d + 1), fmt("%s N=%zu n_f_lb = %llu", fn.name.c_str(), n, (unsigned long long)l.n_f_lb));
      c.expect(l.n_f_ub == n * (d + 1), fmt("%s N=%zu n_f_ub = %llu", fn.name.c_str(), n, (unsigned long long)l.n_f_ub));
      c.expect(l.n_f_s == n * (d + 1), fmt("%s N=%zu n_f_s = %llu", fn.name.c_str(), n, (unsigned long long)l.n_f_s));
    }
  }
  return c.finish("ledger counts N(3d+1) for LB, N(d+1) for UB and S_tot");
}

// Nonincreasing once at most one point is removed.
bool monotone_but_one(const std::vector<ConvergenceRow>& rows) {
  for (std::size_t skip = 0; skip <= rows.size(); ++skip) {
    double prev = INFINITY;
    bool ok = true;
    for (std::size_t k = 0; k < rows.size() && ok; ++k) {
      if (k == skip) continue;
      ok = rows[k].rmse <= prev;
      prev = rows[k].rmse;
    }
    if (ok) return true;
  }
  return false;
}

bool ac9() {
  Criterion c("AC9");
  const TestFunction fn = make_g_function(kTableA);
  const auto grid = power_of_two_grid(1u << 8, 1u << 14);
  ConvergenceOptions opts;
  opts.seed = kSeed;
  std::ostringstream summary;
  for (std::size_t var : {std::size_t{0}, std::size_t{2}, std::size_t{4}}) {
    const auto tables = rmse_convergence(fn, {Quantity::lb2, Quantity::ub1, Quantity::s_total}, var, grid, 25, opts);
    double alpha[3] = {NAN, NAN, NAN};
    for (std::size_t q = 0; q < 3; ++q) {
      const auto& t = tables[q];
      if (t.fit) alpha[q] = t.fit->exponent;
      const std::string tag = to_string(t.quantity) + "_" + std::to_string(var + 1);
      c.expect(monotone_but_one(t.rows), tag + " RMSE not monotone within one point");
      if (t.fit && t.fit->excluded_count) c.note(tag + " fit excluded N=" + std::to_string(*t.fit->excluded_count));
    }
    c.expect(alpha[0] >= alpha[1], fmt("x%zu alpha(LB2) = %.3f < alpha(UB1) = %.3f", var + 1, alpha[0], alpha[1]));
    c.expect(alpha[0] >= 0.6, fmt("x%zu alpha(LB2) = %.3f < 0.6", var + 1, alpha[0]));
    summary << fmt(" x%zu: LB2 %.2f UB1 %.2f S_tot %.2f;", var + 1, alpha[0], alpha[1], alpha[2]);
  }
  return c.finish("K=25, N=2^8..2^14, alpha" + summary.str());
}

bool ac10() {
  Criterion c("AC10");
  std::size_t pairs = 0;
  for (const auto& r : g_seen) {
    if (r.distribution != DistributionKind::uniform01) continue;
    ++pairs;
    for (std::size_t i = 0; i < r.variables.size(); ++i) {
      const auto& v = r.variables[i];
      const double slack = 1e-12 * v.nu;
      c.expect(*v.zeta <= v.nu / 8.0 + slack,
               fmt("%s N=%zu zeta_%zu = %.6g > nu/8 = %.6g", r.model.c_str(), r.count, i + 1, *v.zeta, v.nu / 8.0));
      c.expect(v.morris_mu * v.morris_mu <= v.nu + slack,
               fmt("%s N=%zu mu_%zu^2 = %.6g > nu = %.6g", r.model.c_str(), r.count, i + 1, v.morris_mu * v.morris_mu, v.nu));
    }
  }

  const TestFunction models[] = {make_g_function(kTableA), make_hartmann6()};
  for (const auto& fn : models) {
    const auto plan = make_plan(fn.model, 1u << 12, std::nullopt, kSeed);
    const std::string a = app::report_to_json(assemble_report(fn.model, plan)).dump(2);
    const std::string b = app::report_to_json(assemble_report(fn.model, plan)).dump(2);
    c.expect(a == b, fn.name + " reports differ between identical runs");
    const auto ra = replicate_reports(fn.model, 1u << 10, 3, kSeed);
    const auto rb = replicate_reports(fn.model, 1u << 10, 3, kSeed);
    for (std::size_t k = 0; k < 3; ++k) {
      c.expect(app::report_to_json(ra[k]).dump() == app::report_to_json(rb[k]).dump(),
               fn.name + " shifted replicate " + std::to_string(k) + " differs");
    }
  }

  const TestFunction normal = make_linear({3.0, 0.0, 0.0}, {0.0, 1.0, -2.0},
                                          {Distribution::normal(0, 0.5), Distribution::normal(1, 1.5),
                                           Distribution::normal(-2, 0.25)});
  const auto& ref = *normal.analytic;
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    worst = std::max({worst, std::abs(ref.lb_normal[i] - ref.total[i]), std::abs(ref.ub_normal[i] - ref.total[i])});
  }
  c.expect(worst <= 1e-10, fmt("normal linear tightness error %.3g", worst));
  return c.finish(fmt("invariants on %zu reports, deterministic JSON, normal linear tightness %.1e", pairs, worst));
}

}  // namespace

int main() {
  const std::vector<std::function<bool()>> criteria = {ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10};
  std::size_t failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    try {
      if (!criteria[k]()) ++failed;
    } catch (const std::exception& e) {
      std::cout << "FAIL AC" << k + 1 << "  exception: " << e.what() << std::endl;
      ++failed;
    }
  }
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " of 10 criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
