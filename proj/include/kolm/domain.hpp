#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kolm {

inline constexpr double pi = 3.14159265358979323846;

/// Thrown on invalid run parameters (bad resolution, malformed config, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an algorithm fails numerically (divergence, NaN, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DomainKind { torus, channel };

/// Geometry plus collocation resolution. A torus is [0,2*pi*delta] x [0,2*pi]
/// with Fourier modes in both directions; a channel is [0,2*pi] x [-1,1] with
/// Fourier modes in x and a Dirichlet sine basis in y (l = 1..ny).
struct DomainSpec {
    DomainKind kind = DomainKind::torus;
    double delta = 1.0;
    int nx = 64;
    int ny = 64;

    static DomainSpec torus(double delta, int nx, int ny) {
        if (delta <= 0.0) throw ConfigError("torus aspect ratio delta must be positive");
        if (nx < 8 || ny < 8 || nx % 2 || ny % 2)
            throw ConfigError("resolution must be even and >= 8");
        return {DomainKind::torus, delta, nx, ny};
    }

    static DomainSpec square_torus(int n) { return torus(1.0, n, n); }

    static DomainSpec channel(int nx, int ny) {
        if (nx < 8 || ny < 8 || nx % 2)
            throw ConfigError("channel resolution: nx even and both >= 8");
        return {DomainKind::channel, 1.0, nx, ny};
    }

    bool is_torus() const { return kind == DomainKind::torus; }
    bool is_square() const { return is_torus() && std::abs(delta - 1.0) < 1e-12; }

    /// Symbol of -Laplacian on mode (k,l): k^2/delta^2 + l^2 on the torus,
    /// k^2 + (l*pi/2)^2 on the channel.
    double lam(int k, int l) const {
        if (kind == DomainKind::torus) {
            const double kd = k / delta;
            return kd * kd + double(l) * double(l);
        }
        const double ly = 0.5 * pi * l;
        return double(k) * double(k) + ly * ly;
    }

    /// True if some mode (k,l), k != 0, hits the Helmholtz kernel
    /// k^2/delta^2 + l^2 = 1 (possible only when delta is an integer).
    bool kernel_collision() const {
        if (!is_torus()) return false;
        for (int k = 1; k <= nx / 2; ++k)
            for (int l = 0; l <= ny / 2; ++l)
                if (std::abs(lam(k, l) - 1.0) < 1e-12) return true;
        return false;
    }

    /// Domain area: 4*pi^2*delta (torus) or 4*pi (channel).
    double area() const {
        return is_torus() ? 4.0 * pi * pi * delta : 4.0 * pi;
    }

    bool operator==(const DomainSpec&) const = default;
};

/// Mode sets for the kernel of the linearized operator around the Kolmogorov
/// flow and for the Helmholtz kernel ker(1+Delta).
///
/// On the square torus ker L_K spans all shears (k = 0) plus cos(x), sin(x);
/// on a rectangular torus only the shears remain. The Helmholtz kernel holds
/// every mode with k^2/delta^2 + l^2 = 1.
struct KernelSpec {
    DomainSpec domain;

    explicit KernelSpec(const DomainSpec& d) : domain(d) {
        if (!d.is_torus()) throw ConfigError("KernelSpec requires a torus domain");
    }

    bool in_kernel_LK(int k, int l) const {
        if (k == 0) return true;
        return domain.is_square() && std::abs(k) == 1 && l == 0;
    }

    bool in_helmholtz_kernel(int k, int l) const {
        return std::abs(domain.lam(k, l) - 1.0) < 1e-12;
    }
};

} // namespace kolm
