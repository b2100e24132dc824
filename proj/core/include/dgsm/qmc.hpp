#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "dgsm/numerics.hpp"

namespace dgsm {

/// Sobol' direction numbers in the Joe–Kuo text layout:
///
///   d s a m_1 ... m_s
///
/// one row per dimension starting at d = 2 (dimension 1 is van der Corput),
/// where s is the primitive-polynomial degree, a packs its interior
/// coefficients and m_k are the odd initial direction integers. Lines that
/// start with '#' and the optional "d s a m_i" header are ignored.
class DirectionTable {
public:
  static constexpr unsigned kBits = 32;

  static DirectionTable parse(std::string_view text);
  static DirectionTable from_file(const std::filesystem::path& path);
  /// The bundled 1024-dimension table.
  static const DirectionTable& builtin();

  std::size_t max_dimension() const noexcept { return directions_.size(); }
  /// Direction integers v_{j,k} (k = 0 is the most significant bit).
  const std::array<std::uint32_t, kBits>& directions(std::size_t dim) const {
    return directions_.at(dim);
  }

private:
  std::vector<std::array<std::uint32_t, kBits>> directions_;
};

/// Deterministic point-set description: indices 1..count of the Sobol'
/// sequence in `dimension` coordinates (the all-zeros point at index 0 is
/// skipped), optionally rotated modulo 1 by `shift`.
struct SamplePlan {
  std::size_t dimension = 0;
  std::size_t count = 0;
  std::optional<std::vector<double>> shift;
  std::uint64_t seed = 0;

  void validate(const DirectionTable& table = DirectionTable::builtin()) const;
};

/// Raw Sobol' point with natural (non-Gray-code) index ordering.
void sobol_point(const DirectionTable& table, std::uint64_t index, std::size_t dimension,
                 std::span<double> out);

/// N x d matrix of plan points, all coordinates in [0, 1).
Matrix sobol_points(const SamplePlan& plan,
                    const DirectionTable& table = DirectionTable::builtin());

/// K plans that differ only in their Cranley–Patterson shift. The shift for
/// replicate k is a function of (seed, k) alone.
std::vector<SamplePlan> replicate_plans(std::size_t dimension, std::size_t count, std::size_t K,
                                        std::uint64_t seed);

/// Shift vector for replicate k of the given seed.
std::vector<double> replicate_shift(std::size_t dimension, std::uint64_t seed, std::uint64_t k);

}  // namespace dgsm
