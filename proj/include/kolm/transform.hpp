#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "kolm/field.hpp"

namespace kolm {
namespace detail {

/// Process-wide cache of FFTW c2c plans, keyed by (nx, ny, sign).
/// Plans are created with FFTW_UNALIGNED so they can execute on any buffer
/// via the new-array interface; creation is serialized (the FFTW planner is
/// not thread-safe), execution is not.
class FftEngine {
public:
    static FftEngine& instance() {
        static FftEngine e;
        return e;
    }

    void execute(int nx, int ny, int sign, Complex* in, Complex* out) {
        fftw_plan p = plan(nx, ny, sign);
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    }

private:
    fftw_plan plan(int nx, int ny, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_tuple(nx, ny, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<Complex> scratch(size_t(nx) * ny);
        fftw_plan p = fftw_plan_dft_2d(nx, ny,
                                       reinterpret_cast<fftw_complex*>(scratch.data()),
                                       reinterpret_cast<fftw_complex*>(scratch.data()),
                                       sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_[key] = p;
        return p;
    }

    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline double channel_sine(int l, int j, int ny) {
    // sin(l*pi*(y_j+1)/2) at the uniform interior node y_j = -1 + 2(j+1)/(ny+1)
    return std::sin(pi * double(l) * double(j + 1) / double(ny + 1));
}

} // namespace detail

/// Physical-space samples on the collocation grid, row-major [ix*ny + iy].
/// Torus: x_i = 2 pi delta i/nx, y_j = 2 pi j/ny. Channel: x_i = 2 pi i/nx,
/// y_j = -1 + 2(j+1)/(ny+1) (interior points of a uniform grid).
using PhysicalField = std::vector<double>;

inline PhysicalField to_physical(const SpectralField& f) {
    const int nx = f.nx(), ny = f.ny();
    if (f.domain().kind == DomainKind::torus) {
        std::vector<Complex> buf(f.data());
        detail::FftEngine::instance().execute(nx, ny, FFTW_BACKWARD, buf.data(), buf.data());
        PhysicalField out(buf.size());
        for (size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
        return out;
    }
    // channel: sine reconstruction in y, inverse DFT in x
    std::vector<Complex> tmp(size_t(nx) * ny, Complex(0, 0));
    for (int ix = 0; ix < nx; ++ix)
        for (int j = 0; j < ny; ++j) {
            Complex s = 0.0;
            for (int l = 1; l <= ny; ++l)
                s += f.data()[size_t(ix) * ny + (l - 1)] * detail::channel_sine(l, j, ny);
            tmp[size_t(ix) * ny + j] = s;
        }
    // inverse DFT over x for each fixed j
    PhysicalField out(size_t(nx) * ny);
    std::vector<Complex> col(nx), colout(nx);
    for (int j = 0; j < ny; ++j) {
        for (int ix = 0; ix < nx; ++ix) col[ix] = tmp[size_t(ix) * ny + j];
        for (int i = 0; i < nx; ++i) {
            Complex s = 0.0;
            for (int ix = 0; ix < nx; ++ix)
                s += col[ix] * std::polar(1.0, 2.0 * pi * double(i) * double(ix <= nx / 2 ? ix : ix - nx) / double(nx));
            out[size_t(i) * ny + j] = s.real();
        }
    }
    return out;
}

inline SpectralField to_spectral(const PhysicalField& values, const DomainSpec& d) {
    if (values.size() != size_t(d.nx) * size_t(d.ny))
        throw ConfigError("physical array size does not match domain resolution");
    SpectralField f(d);
    const int nx = d.nx, ny = d.ny;
    if (d.kind == DomainKind::torus) {
        std::vector<Complex> buf(values.size());
        for (size_t i = 0; i < values.size(); ++i) buf[i] = values[i];
        detail::FftEngine::instance().execute(nx, ny, FFTW_FORWARD, buf.data(), buf.data());
        const double inv = 1.0 / (double(nx) * double(ny));
        for (size_t i = 0; i < buf.size(); ++i) f.data()[i] = buf[i] * inv;
        f.make_real();
        return f;
    }
    // channel: forward DFT in x, DST-I projection in y
    // (sum_j sin(pi l (j+1)/(ny+1)) sin(pi m (j+1)/(ny+1)) = (ny+1)/2 delta_lm)
    std::vector<Complex> xhat(size_t(nx) * ny, Complex(0, 0));
    for (int j = 0; j < ny; ++j)
        for (int ik = 0; ik < nx; ++ik) {
            const int k = ik <= nx / 2 ? ik : ik - nx;
            Complex s = 0.0;
            for (int i = 0; i < nx; ++i)
                s += values[size_t(i) * ny + j] * std::polar(1.0, -2.0 * pi * double(k) * double(i) / double(nx));
            xhat[size_t(ik) * ny + j] = s / double(nx);
        }
    for (int ik = 0; ik < nx; ++ik)
        for (int l = 1; l <= ny; ++l) {
            Complex s = 0.0;
            for (int j = 0; j < ny; ++j)
                s += xhat[size_t(ik) * ny + j] * detail::channel_sine(l, j, ny);
            f.data()[size_t(ik) * ny + (l - 1)] = s * (2.0 / double(ny + 1));
        }
    f.make_real();
    return f;
}

/// Copy the spectral band of `f` into a (px x py) grid, zero-padding the rest.
inline SpectralField pad_torus(const SpectralField& f, int px, int py) {
    SpectralField g(DomainSpec::torus(f.domain().delta, px, py));
    f.for_each([&](int k, int l, const Complex& c) {
        if (std::abs(k) < f.nx() / 2 && std::abs(l) < f.ny() / 2) g.at(k, l) = c;
    });
    return g;
}

/// Restrict a fine-grid field to the band of the (nx x ny) target grid.
inline SpectralField restrict_torus(const SpectralField& f, const DomainSpec& target) {
    SpectralField g(target);
    g.for_each([&](int k, int l, Complex& c) {
        if (std::abs(k) < target.nx / 2 && std::abs(l) < target.ny / 2) c = f.get(k, l);
    });
    return g;
}

} // namespace kolm
