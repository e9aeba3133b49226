// Snapshot serialization. All multi-byte values are written byte by byte in
// little-endian order, so files are portable across hosts and safe to commit
// as golden references.
#include "spinwell/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "spinwell/errors.hpp"

namespace spinwell {
namespace {

constexpr char kMagic[8] = {'S', 'P', 'I', 'N', 'W', 'E', 'L', 'L'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
    b.push_back(static_cast<unsigned char>(v & 0xff));
    b.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
    b.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
    b.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void put_f64(std::vector<unsigned char>& b, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    for (int i = 0; i < 8; ++i)
        b.push_back(static_cast<unsigned char>((u >> (8 * i)) & 0xff));
}

struct Cursor {
    const unsigned char* p;
    std::size_t left;
    const std::string& path;

    void need(std::size_t n, const char* what) const {
        if (left < n)
            throw ConfigError("snapshot '" + path + "' truncated while reading " + what);
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
        p += 4;
        left -= 4;
        return v;
    }
    double f64(const char* what) {
        need(8, what);
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i)
            u |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        p += 8;
        left -= 8;
        double v;
        std::memcpy(&v, &u, 8);
        return v;
    }
};

std::vector<unsigned char> read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open snapshot '" + path + "'");
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return data;
}

SnapshotInfo parse_header(Cursor& c) {
    c.need(8, "magic");
    if (std::memcmp(c.p, kMagic, 8) != 0)
        throw ConfigError("snapshot '" + c.path + "' has a bad magic; not a state file");
    c.p += 8;
    c.left -= 8;
    const std::uint32_t ver = c.u32("version");
    if (ver != kVersion)
        throw ConfigError("snapshot '" + c.path + "' has format version " +
                          std::to_string(ver) + ", expected " + std::to_string(kVersion));
    SnapshotInfo h;
    for (int i = 0; i < 3; ++i)
        h.modes[i] = static_cast<int>(c.u32("modes"));
    for (int i = 0; i < 3; ++i)
        h.bands[i] = static_cast<int>(c.u32("bands"));
    for (int i = 0; i < 3; ++i)
        h.box[i] = c.f64("box lengths");
    for (int i = 0; i < 3; ++i)
        h.torus[i] = c.f64("torus lengths");
    for (int i = 0; i < 3; ++i)
        h.quad_nodes[i] = static_cast<int>(c.u32("quad nodes"));
    h.time = c.f64("time");
    h.m_count = static_cast<std::size_t>(3) * h.modes[0] * h.modes[1] * h.modes[2];
    std::size_t y = 3;
    for (int i = 0; i < 3; ++i)
        y *= static_cast<std::size_t>(2 * h.bands[i] - 1);
    h.y_count = y;
    return h;
}

} // namespace

void save_snapshot(const std::string& path, const SpectralBases& sb,
                   const GalerkinState& s) {
    std::vector<unsigned char> buf;
    buf.reserve(64 + 8 * (s.m.c.size() + s.b.c.size() + s.e.c.size()));
    buf.insert(buf.end(), kMagic, kMagic + 8);
    put_u32(buf, kVersion);
    for (int i = 0; i < 3; ++i)
        put_u32(buf, static_cast<std::uint32_t>(sb.mag.modes[i]));
    for (int i = 0; i < 3; ++i)
        put_u32(buf, static_cast<std::uint32_t>(sb.em.bands[i]));
    for (int i = 0; i < 3; ++i)
        put_f64(buf, sb.mag.lengths[i]);
    for (int i = 0; i < 3; ++i)
        put_f64(buf, sb.em.lengths[i]);
    for (int i = 0; i < 3; ++i)
        put_u32(buf, static_cast<std::uint32_t>(sb.mag.nodes[i]));
    put_f64(buf, s.t);
    for (double v : s.m.c)
        put_f64(buf, v);
    for (double v : s.b.c)
        put_f64(buf, v);
    for (double v : s.e.c)
        put_f64(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot create snapshot '" + path + "'");
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out)
        throw ConfigError("short write on snapshot '" + path + "'");
}

GalerkinState load_snapshot(const std::string& path, const SpectralBases& sb) {
    const std::vector<unsigned char> data = read_all(path);
    Cursor c{data.data(), data.size(), path};
    const SnapshotInfo h = parse_header(c);

    auto mismatch = [&](const char* what) {
        throw ConfigError("snapshot '" + path + "' was written for a different " +
                          what + " than this run uses");
    };
    for (int i = 0; i < 3; ++i) {
        if (h.modes[i] != sb.mag.modes[i])
            mismatch("magnetization band");
        if (h.bands[i] != sb.em.bands[i])
            mismatch("torus band");
        if (h.box[i] != sb.mag.lengths[i])
            mismatch("box geometry");
        if (h.torus[i] != sb.em.lengths[i])
            mismatch("torus geometry");
        if (h.quad_nodes[i] != sb.mag.nodes[i])
            mismatch("quadrature grid");
    }

    GalerkinState s;
    s.t = h.time;
    s.m.modes = sb.mag.modes;
    s.m.c.resize(h.m_count);
    s.b.bands = sb.em.bands;
    s.b.nfact = sb.em.nfact;
    s.b.c.resize(h.y_count);
    s.e = s.b;
    for (double& v : s.m.c)
        v = c.f64("magnetization block");
    for (double& v : s.b.c)
        v = c.f64("induction block");
    for (double& v : s.e.c)
        v = c.f64("electric block");
    if (c.left != 0)
        throw ConfigError("snapshot '" + path + "' has " + std::to_string(c.left) +
                          " trailing bytes; refusing to guess");
    return s;
}

SnapshotInfo read_snapshot_info(const std::string& path) {
    const std::vector<unsigned char> data = read_all(path);
    Cursor c{data.data(), data.size(), path};
    return parse_header(c);
}

} // namespace spinwell
