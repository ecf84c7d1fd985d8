#include "phyllo/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <zlib.h>

#include "phyllo/csv.hpp"

namespace phyllo {

namespace {

constexpr char kMagic[8] = {'P', 'H', 'Y', 'L', 'C', 'K', 'P', 'T'};

class Writer {
public:
    void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
    void u32(std::uint32_t v) {
        for (int k = 0; k < 4; ++k) out_.push_back(char((v >> (8 * k)) & 0xffu));
    }
    void u64(std::uint64_t v) {
        for (int k = 0; k < 8; ++k) out_.push_back(char((v >> (8 * k)) & 0xffu));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    std::string& str() { return out_; }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(const std::string& s) : s_(s) {}
    void need(std::size_t n) const {
        if (pos_ + n > s_.size()) throw CorruptCheckpoint("checkpoint is truncated");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= std::uint32_t(std::uint8_t(s_[pos_ + std::size_t(k)])) << (8 * k);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= std::uint64_t(std::uint8_t(s_[pos_ + std::size_t(k)])) << (8 * k);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::size_t pos() const { return pos_; }
    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

std::uint32_t crc(const std::string& s, std::size_t from, std::size_t to) {
    uLong c = crc32(0L, Z_NULL, 0);
    c = crc32(c, reinterpret_cast<const Bytef*>(s.data() + from), uInt(to - from));
    return std::uint32_t(c);
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& c) {
    const GridSpec& g = c.field.grid;
    Writer w;
    w.bytes(kMagic, 8);
    w.u32(Checkpoint::version);
    w.u32(std::uint32_t(g.geometry));
    w.f64(g.r_min);
    w.f64(g.r_max);
    w.u64(std::uint64_t(g.n_r));
    w.u64(std::uint64_t(g.n_theta));
    w.f64(c.params.mu);
    w.f64(c.params.beta);
    w.f64(c.params.dt);
    w.f64(c.params.solver_tol);
    w.u64(std::uint64_t(std::int64_t(c.params.max_iter)));
    w.f64(c.t);
    w.u64(c.step);
    w.u64(std::uint64_t(g.n_r * g.n_theta * 8));
    w.u32(crc(w.str(), 0, w.str().size()));
    const std::size_t data_start = w.str().size();
    for (Index j = 0; j < g.n_theta; ++j) w.f64(c.field.ghost(j));
    for (Index i = 0; i < g.n_r; ++i)
        for (Index j = 0; j < g.n_theta; ++j) w.f64(c.field.values(i, j));
    w.u32(crc(w.str(), data_start, w.str().size()));
    return std::move(w.str());
}

Checkpoint decode_checkpoint(const std::string& bytes) {
    Reader r(bytes);
    r.need(8);
    if (std::memcmp(bytes.data(), kMagic, 8) != 0) throw CorruptCheckpoint("not a checkpoint (bad magic)");
    r.skip(8);
    const std::uint32_t version = r.u32();
    if (version != Checkpoint::version)
        throw CorruptCheckpoint("unsupported checkpoint version " + std::to_string(version));
    const std::uint32_t geometry = r.u32();
    GridSpec g;
    g.r_min = r.f64();
    g.r_max = r.f64();
    g.n_r = Index(r.u64());
    g.n_theta = Index(r.u64());
    Checkpoint c;
    c.params.mu = r.f64();
    c.params.beta = r.f64();
    c.params.dt = r.f64();
    c.params.solver_tol = r.f64();
    c.params.max_iter = int(std::int64_t(r.u64()));
    c.t = r.f64();
    c.step = r.u64();
    const std::uint64_t payload = r.u64();
    const std::size_t header_end = r.pos();
    if (r.u32() != crc(bytes, 0, header_end)) throw CorruptCheckpoint("checkpoint header checksum mismatch");
    if (geometry > 1) throw CorruptCheckpoint("unknown geometry tag");
    g.geometry = Geometry(geometry);
    if (g.n_r < 1 || g.n_theta < 1 || g.n_r > (Index(1) << 24) || g.n_theta > (Index(1) << 24) ||
        payload != std::uint64_t(g.n_r * g.n_theta * 8))
        throw CorruptCheckpoint("checkpoint payload length does not match the grid");

    const std::size_t data_start = r.pos();
    r.need(std::size_t(g.n_theta) * 8 + std::size_t(payload) + 4);
    c.field = ScalarField(g);
    for (Index j = 0; j < g.n_theta; ++j) c.field.ghost(j) = r.f64();
    for (Index i = 0; i < g.n_r; ++i)
        for (Index j = 0; j < g.n_theta; ++j) c.field.values(i, j) = r.f64();
    const std::size_t data_end = r.pos();
    if (r.u32() != crc(bytes, data_start, data_end)) throw CorruptCheckpoint("checkpoint payload checksum mismatch");
    if (r.pos() != bytes.size()) throw CorruptCheckpoint("trailing bytes after checkpoint payload");
    return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
    write_file_atomic(path, encode_checkpoint(c));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

}  // namespace phyllo
