#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "seqae/alignment.hpp"

namespace seqae {

// Binary matrix layout shared by distance matrices and encoded datasets:
//   "SWDM" | u32 rows | u32 cols | u32 flags (bit0 = symmetric)
//   rows * cols little-endian float32, row-major.

struct RawMatrix {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::uint32_t flags = 0;
    std::vector<float> values;
};

void write_raw_matrix(std::ostream& out, std::uint32_t rows, std::uint32_t cols,
                      std::uint32_t flags, const std::vector<float>& values);
/// Throws FormatError on a bad magic or truncated payload.
RawMatrix read_raw_matrix(std::istream& in);

void write_distance_matrix(std::ostream& out, const DistanceMatrix& m);
void write_distance_matrix(const std::string& path, const DistanceMatrix& m);
/// Validates values and symmetry after reading.
DistanceMatrix read_distance_matrix(std::istream& in);
DistanceMatrix read_distance_matrix(const std::string& path);

constexpr std::size_t kMaxCsvDim = 2000;

/// Plain CSV, one row per line. Throws ArgumentError for matrices larger than
/// kMaxCsvDim in either dimension.
void write_distance_csv(std::ostream& out, const DistanceMatrix& m);

// little-endian primitives, also used by the model file
void put_u32(std::ostream& out, std::uint32_t v);
void put_u64(std::ostream& out, std::uint64_t v);
void put_f32(std::ostream& out, float v);
void put_f64(std::ostream& out, double v);
std::uint32_t get_u32(std::istream& in);
std::uint64_t get_u64(std::istream& in);
float get_f32(std::istream& in);
double get_f64(std::istream& in);

/// Formats a double so that parsing it back yields the same value.
std::string format_exact(double v);

} // namespace seqae
