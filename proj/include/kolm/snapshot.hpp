#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>

#include "kolm/field.hpp"

namespace kolm {

/// Field snapshot file format ("KOLM"):
///   magic "KOLM" | u32 version | u8 kind (0 torus, 1 channel) | f64 delta |
///   u32 nx | u32 ny | nx*ny complex128, row-major in storage order
///   (x-index outer, y-index inner). All multi-byte values little-endian.
inline constexpr uint32_t snapshot_version = 1;

inline void write_snapshot(const SpectralField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open snapshot file for writing: " + path);
    os.write("KOLM", 4);
    auto put = [&os](const void* p, size_t n) { os.write(static_cast<const char*>(p), std::streamsize(n)); };
    const uint32_t ver = snapshot_version;
    const uint8_t kind = f.domain().kind == DomainKind::torus ? 0 : 1;
    const double delta = f.domain().delta;
    const uint32_t nx = uint32_t(f.nx()), ny = uint32_t(f.ny());
    put(&ver, 4);
    put(&kind, 1);
    put(&delta, 8);
    put(&nx, 4);
    put(&ny, 4);
    put(f.data().data(), f.data().size() * sizeof(Complex));
    if (!os) throw ConfigError("short write on snapshot file: " + path);
}

inline SpectralField read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open snapshot file: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "KOLM", 4) != 0)
        throw ConfigError("not a KOLM snapshot: " + path);
    auto get = [&is, &path](void* p, size_t n) {
        is.read(static_cast<char*>(p), std::streamsize(n));
        if (!is) throw ConfigError("truncated KOLM snapshot: " + path);
    };
    uint32_t ver, nx, ny;
    uint8_t kind;
    double delta;
    get(&ver, 4);
    if (ver != snapshot_version) throw ConfigError("unsupported snapshot version");
    get(&kind, 1);
    get(&delta, 8);
    get(&nx, 4);
    get(&ny, 4);
    DomainSpec d = kind == 0 ? DomainSpec::torus(delta, int(nx), int(ny))
                             : DomainSpec::channel(int(nx), int(ny));
    SpectralField f(d);
    get(f.data().data(), f.data().size() * sizeof(Complex));
    return f;
}

} // namespace kolm
