#include "dgsm/qmc.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "dgsm/error.hpp"

namespace dgsm {
namespace detail {
extern const std::string_view kBuiltinDirectionTable;
}

namespace {

constexpr double kTwoPowMinus32 = 0x1p-32;

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::array<std::uint32_t, DirectionTable::kBits> van_der_corput_directions() {
  std::array<std::uint32_t, DirectionTable::kBits> v{};
  for (unsigned k = 0; k < DirectionTable::kBits; ++k) v[k] = 1u << (31 - k);
  return v;
}

}  // namespace

DirectionTable DirectionTable::parse(std::string_view text) {
  DirectionTable table;
  table.directions_.push_back(van_der_corput_directions());

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == 'd') continue;

    std::istringstream row(line);
    std::size_t dim = 0;
    unsigned s = 0;
    std::uint64_t a = 0;
    if (!(row >> dim >> s >> a)) {
      fail(ErrorCode::invalid_argument, "direction table line " + std::to_string(line_no) +
                                            ": expected 'd s a m_1 ... m_s'");
    }
    require(dim == table.directions_.size() + 1, ErrorCode::invalid_argument,
            "direction table line " + std::to_string(line_no) + ": dimensions must be consecutive");
    require(s >= 1 && s < kBits, ErrorCode::invalid_argument,
            "direction table line " + std::to_string(line_no) + ": bad polynomial degree");

    std::vector<std::uint64_t> m(s);
    for (unsigned k = 0; k < s; ++k) {
      if (!(row >> m[k])) {
        fail(ErrorCode::invalid_argument, "direction table line " + std::to_string(line_no) +
                                              ": missing initial direction integers");
      }
      require(m[k] % 2 == 1 && m[k] < (std::uint64_t{1} << (k + 1)), ErrorCode::invalid_argument,
              "direction table line " + std::to_string(line_no) +
                  ": m_k must be odd and below 2^k");
    }

    std::array<std::uint32_t, kBits> v{};
    for (unsigned k = 0; k < kBits; ++k) {
      if (k < s) {
        v[k] = static_cast<std::uint32_t>(m[k] << (31 - k));
      } else {
        std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
        for (unsigned j = 1; j < s; ++j) {
          if ((a >> (s - 1 - j)) & 1u) value ^= v[k - j];
        }
        v[k] = value;
      }
    }
    table.directions_.push_back(v);
  }
  return table;
}

DirectionTable DirectionTable::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::invalid_argument,
          "cannot open direction table " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

const DirectionTable& DirectionTable::builtin() {
  static const DirectionTable table = parse(detail::kBuiltinDirectionTable);
  return table;
}

void SamplePlan::validate(const DirectionTable& table) const {
  require(dimension > 0, ErrorCode::invalid_argument, "sample plan dimension must be positive");
  require(dimension <= table.max_dimension(), ErrorCode::invalid_argument,
          "sample plan dimension " + std::to_string(dimension) +
              " exceeds the direction table (" + std::to_string(table.max_dimension()) + ")");
  require(count > 0, ErrorCode::invalid_argument, "sample plan needs at least one point");
  require(count < (std::uint64_t{1} << DirectionTable::kBits), ErrorCode::invalid_argument,
          "sample plan count exceeds 2^32 - 1");
  if (shift) {
    require(shift->size() == dimension, ErrorCode::dimension_mismatch,
            "shift has wrong dimension");
    for (double s : *shift) {
      require(s >= 0.0 && s < 1.0, ErrorCode::invalid_argument, "shift entries must be in [0, 1)");
    }
  }
}

void sobol_point(const DirectionTable& table, std::uint64_t index, std::size_t dimension,
                 std::span<double> out) {
  require(dimension <= table.max_dimension(), ErrorCode::invalid_argument,
          "dimension exceeds the direction table");
  require(out.size() == dimension, ErrorCode::dimension_mismatch, "output has wrong size");
  for (std::size_t j = 0; j < dimension; ++j) {
    const auto& v = table.directions(j);
    std::uint32_t x = 0;
    for (std::uint64_t bits = index, k = 0; bits != 0; bits >>= 1, ++k) {
      if (bits & 1u) x ^= v[k];
    }
    out[j] = static_cast<double>(x) * kTwoPowMinus32;
  }
}

Matrix sobol_points(const SamplePlan& plan, const DirectionTable& table) {
  plan.validate(table);
  const std::size_t d = plan.dimension;
  Matrix points(plan.count, d);

  std::vector<std::uint32_t> state(d, 0);
  for (std::uint64_t n = 1; n <= plan.count; ++n) {
    // x(n) = x(n-1) xor the directions of every bit that flips.
    const std::uint64_t flipped = (n - 1) ^ n;
    for (std::size_t j = 0; j < d; ++j) {
      const auto& v = table.directions(j);
      std::uint32_t x = state[j];
      for (std::uint64_t bits = flipped, k = 0; bits != 0; bits >>= 1, ++k) {
        if (bits & 1u) x ^= v[k];
      }
      state[j] = x;
      double u = static_cast<double>(x) * kTwoPowMinus32;
      if (plan.shift) {
        u += (*plan.shift)[j];
        if (u >= 1.0) u -= 1.0;
      }
      points(n - 1, j) = u;
    }
  }
  return points;
}

std::vector<double> replicate_shift(std::size_t dimension, std::uint64_t seed, std::uint64_t k) {
  std::uint64_t state = seed;
  const std::uint64_t mixed_seed = splitmix64(state);
  state = mixed_seed ^ (0xd1b54a32d192ed03ULL * (k + 1));
  std::vector<double> shift(dimension);
  for (auto& s : shift) {
    s = static_cast<double>(splitmix64(state) >> 11) * 0x1p-53;
  }
  return shift;
}

std::vector<SamplePlan> replicate_plans(std::size_t dimension, std::size_t count, std::size_t K,
                                        std::uint64_t seed) {
  require(K >= 1, ErrorCode::invalid_argument, "need at least one replicate");
  std::vector<SamplePlan> plans;
  plans.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    SamplePlan plan{dimension, count, replicate_shift(dimension, seed, k), seed};
    plan.validate();
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace dgsm
