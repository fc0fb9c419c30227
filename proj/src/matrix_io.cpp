#include "seqae/matrix_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "seqae/error.hpp"

namespace seqae {

namespace {

constexpr char kMagic[4] = {'S', 'W', 'D', 'M'};

template <typename U>
void put_le(std::ostream& out, U v) {
    char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, sizeof(U));
}

template <typename U>
U get_le(std::istream& in) {
    unsigned char buf[sizeof(U)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(U)))
        throw FormatError("unexpected end of file");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
    return v;
}

} // namespace

void put_u32(std::ostream& out, std::uint32_t v) { put_le(out, v); }
void put_u64(std::ostream& out, std::uint64_t v) { put_le(out, v); }
void put_f32(std::ostream& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
std::uint32_t get_u32(std::istream& in) { return get_le<std::uint32_t>(in); }
std::uint64_t get_u64(std::istream& in) { return get_le<std::uint64_t>(in); }
float get_f32(std::istream& in) { return std::bit_cast<float>(get_le<std::uint32_t>(in)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

std::string format_exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_raw_matrix(std::ostream& out, std::uint32_t rows, std::uint32_t cols,
                      std::uint32_t flags, const std::vector<float>& values) {
    out.write(kMagic, 4);
    put_u32(out, rows);
    put_u32(out, cols);
    put_u32(out, flags);
    for (float v : values) put_f32(out, v);
}

RawMatrix read_raw_matrix(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("not a SWDM matrix (bad magic)");
    RawMatrix m;
    m.rows = get_u32(in);
    m.cols = get_u32(in);
    m.flags = get_u32(in);
    const auto bytes = check_capacity(m.rows, m.cols);
    m.values.resize(static_cast<std::size_t>(m.rows) * m.cols);
    std::vector<char> buf(bytes);
    if (!in.read(buf.data(), static_cast<std::streamsize>(bytes)))
        throw FormatError("SWDM payload truncated: expected " + std::to_string(bytes) + " bytes");
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        std::uint32_t u = 0;
        for (std::size_t b = 0; b < 4; ++b)
            u |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[4 * i + b])) << (8 * b);
        m.values[i] = std::bit_cast<float>(u);
    }
    return m;
}

void write_distance_matrix(std::ostream& out, const DistanceMatrix& m) {
    write_raw_matrix(out, static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols()),
                     m.symmetric() ? 1u : 0u, m.values());
}

void write_distance_matrix(const std::string& path, const DistanceMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write distance matrix '" + path + "'");
    write_distance_matrix(out, m);
}

DistanceMatrix read_distance_matrix(std::istream& in) {
    auto raw = read_raw_matrix(in);
    DistanceMatrix m(raw.rows, raw.cols, (raw.flags & 1u) != 0, std::move(raw.values));
    m.validate();
    return m;
}

DistanceMatrix read_distance_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open distance matrix '" + path + "'");
    try {
        return read_distance_matrix(in);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& m) {
    if (m.rows() > kMaxCsvDim || m.cols() > kMaxCsvDim)
        throw ArgumentError("CSV export is limited to " + std::to_string(kMaxCsvDim) + " x " +
                            std::to_string(kMaxCsvDim) + " matrices");
    char buf[32];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(m(i, j)));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

} // namespace seqae
