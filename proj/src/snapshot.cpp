#include "fgs/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "fgs/error.hpp"

namespace fgs {

namespace {

constexpr char kMagic[4] = {'F', 'G', 'S', '1'};

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Cursor {
public:
    Cursor(const std::string& data, const std::string& path) : data_(data), path_(path) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        pos_ += 4;
        return v;
    }

    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

    void need(std::size_t n) const {
        if (pos_ + n > data_.size())
            throw IoError("snapshot '" + path_ + "' truncated: need " +
                          std::to_string(pos_ + n) + " bytes, file has " +
                          std::to_string(data_.size()));
    }

    std::size_t pos() const { return pos_; }

private:
    const std::string& data_;
    const std::string& path_;
    std::size_t pos_ = 4;   // past magic
};

} // namespace

void write_snapshot(const std::string& path, const FieldPair& state, const Domain2D& domain,
                    double alpha, double t) {
    if (state.u.rows != domain.interior_x() || state.u.cols != domain.interior_y() ||
        state.v.rows != state.u.rows || state.v.cols != state.u.cols)
        throw IoError("write_snapshot: state shape does not match domain");
    std::string buf;
    buf.reserve(4 + 8 + 6 * 8 + 16 * state.u.data.size());
    buf.append(kMagic, 4);
    put_u32(buf, static_cast<std::uint32_t>(domain.nx()));
    put_u32(buf, static_cast<std::uint32_t>(domain.ny()));
    put_f64(buf, domain.a());
    put_f64(buf, domain.b());
    put_f64(buf, domain.c());
    put_f64(buf, domain.d());
    put_f64(buf, alpha);
    put_f64(buf, t);
    for (double v : state.u.data) put_f64(buf, v);
    for (double v : state.v.data) put_f64(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("short write to '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot '" + path + "'");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.size() < 4 || std::memcmp(data.data(), kMagic, 4) != 0)
        throw IoError("'" + path + "' is not a snapshot (bad magic)");

    Cursor cur(data, path);
    const std::uint32_t nx = cur.u32();
    const std::uint32_t ny = cur.u32();
    const double a = cur.f64();
    const double b = cur.f64();
    const double c = cur.f64();
    const double d = cur.f64();
    const double alpha = cur.f64();
    const double t = cur.f64();
    if (nx < 4 || ny < 4)
        throw IoError("snapshot '" + path + "': header dimensions " + std::to_string(nx) +
                      "x" + std::to_string(ny) + " are not a valid grid");

    const std::size_t count = static_cast<std::size_t>(nx - 1) * (ny - 1);
    const std::size_t expect = cur.pos() + 16 * count;
    if (data.size() != expect)
        throw IoError("snapshot '" + path + "': expected " + std::to_string(expect) +
                      " bytes for a " + std::to_string(nx) + "x" + std::to_string(ny) +
                      " grid, file has " + std::to_string(data.size()));

    Snapshot snap{FieldPair{}, Domain2D(a, b, c, d, nx, ny), alpha, t};
    snap.state.u = Field(nx - 1, ny - 1);
    snap.state.v = Field(nx - 1, ny - 1);
    for (double& v : snap.state.u.data) v = cur.f64();
    for (double& v : snap.state.v.data) v = cur.f64();
    return snap;
}

} // namespace fgs
