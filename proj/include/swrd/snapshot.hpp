#pragma once

// Field snapshot container, shared repo-wide and bit-exact:
//   magic "SWRD" | u32 version | u8 domain_kind | u32 nx | u32 ny |
//   u32 component count | per component nx*ny row-major (re, im) f64 pairs,
// all little-endian. Configuration snapshots use the fixed component order
// [A.p10, psi1, psi2bar, phi, h, sigma, H]; link snapshots are [ux, uy].

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "swrd/equations.hpp"
#include "swrd/gauge.hpp"
#include "swrd/grid.hpp"

namespace swrd {

inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) buf.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}
inline void put_f64(std::string& buf, double d) {
    std::uint64_t v = std::bit_cast<std::uint64_t>(d);
    for (int k = 0; k < 8; ++k) buf.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

struct Cursor {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > buf.size()) throw std::runtime_error("snapshot: truncated file");
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(buf[pos++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + static_cast<std::size_t>(k)])) << (8 * k);
        pos += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + static_cast<std::size_t>(k)])) << (8 * k);
        pos += 8;
        return std::bit_cast<double>(v);
    }
};

}  // namespace detail

struct Snapshot {
    DomainKind domain = DomainKind::periodic_torus;
    std::uint32_t nx = 0, ny = 0;
    std::vector<std::vector<cplx>> components;
};

inline void write_snapshot(const std::string& path, const Snapshot& snap) {
    std::string buf;
    buf += "SWRD";
    detail::put_u32(buf, kSnapshotVersion);
    buf.push_back(static_cast<char>(snap.domain));
    detail::put_u32(buf, snap.nx);
    detail::put_u32(buf, snap.ny);
    detail::put_u32(buf, static_cast<std::uint32_t>(snap.components.size()));
    for (const auto& comp : snap.components) {
        if (comp.size() != static_cast<std::size_t>(snap.nx) * snap.ny)
            throw std::runtime_error("snapshot: component size mismatch");
        for (const cplx& v : comp) {
            detail::put_f64(buf, v.real());
            detail::put_f64(buf, v.imag());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("snapshot: cannot open '" + path + "' for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("snapshot: write failed on '" + path + "'");
}

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open '" + path + "'");
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    detail::Cursor cur{buf};
    cur.need(4);
    if (buf.compare(0, 4, "SWRD") != 0) throw std::runtime_error("snapshot: bad magic bytes");
    cur.pos = 4;
    const std::uint32_t ver = cur.u32();
    if (ver != kSnapshotVersion)
        throw std::runtime_error("snapshot: version mismatch (got " + std::to_string(ver) + ")");
    Snapshot snap;
    snap.domain = static_cast<DomainKind>(cur.u8());
    snap.nx = cur.u32();
    snap.ny = cur.u32();
    const std::uint32_t count = cur.u32();
    snap.components.resize(count);
    for (auto& comp : snap.components) {
        comp.resize(static_cast<std::size_t>(snap.nx) * snap.ny);
        for (auto& v : comp) {
            const double re = cur.f64();
            const double im = cur.f64();
            v = cplx(re, im);
        }
    }
    if (cur.pos != buf.size()) throw std::runtime_error("snapshot: trailing bytes");
    return snap;
}

inline void write_configuration_snapshot(const std::string& path, const Configuration& c) {
    Snapshot snap;
    snap.domain = c.grid().kind;
    snap.nx = static_cast<std::uint32_t>(c.grid().nx);
    snap.ny = static_cast<std::uint32_t>(c.grid().ny);
    snap.components = {c.A.potential.p10.values, c.Psi.psi1.values, c.Psi.psi2bar.values,
                       c.Phi.phi.values,         c.metric.h.values, c.metric.sigma.values,
                       c.H.H.values};
    write_snapshot(path, snap);
}

inline void write_link_snapshot(const std::string& path, const LinkField& lf) {
    Snapshot snap;
    snap.domain = lf.grid.kind;
    snap.nx = static_cast<std::uint32_t>(lf.grid.nx);
    snap.ny = static_cast<std::uint32_t>(lf.grid.ny);
    snap.components = {lf.ux, lf.uy};
    write_snapshot(path, snap);
}

}  // namespace swrd
