#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <vector>

#include "kolm/domain.hpp"

namespace kolm {

using Complex = std::complex<double>;

/// Complex Fourier coefficients of a real scalar field.
///
/// Torus storage is FFT order in both indices: slot ix holds wavenumber
/// k = ix for ix <= nx/2, else ix - nx. The coefficient of mode (k,l) is the
/// analytic one: f(x,y) = sum c(k,l) exp(i(k x/delta + l y)). Channel fields
/// use FFT order in x and sine indices l = 1..ny in y:
/// f = sum c(k,l) exp(i k x) sin(l pi (y+1)/2), so f(x,+-1) = 0 identically.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const DomainSpec& d)
        : domain_(d), coeffs_(size_t(d.nx) * size_t(d.ny), Complex(0.0, 0.0)) {}

    const DomainSpec& domain() const { return domain_; }
    int nx() const { return domain_.nx; }
    int ny() const { return domain_.ny; }

    std::vector<Complex>& data() { return coeffs_; }
    const std::vector<Complex>& data() const { return coeffs_; }

    /// Wavenumber of storage slot.
    int k_of(int ix) const { return ix <= domain_.nx / 2 ? ix : ix - domain_.nx; }
    int l_of(int iy) const {
        if (domain_.kind == DomainKind::channel) return iy + 1;
        return iy <= domain_.ny / 2 ? iy : iy - domain_.ny;
    }

    bool has_mode(int k, int l) const {
        const int nx = domain_.nx, ny = domain_.ny;
        if (k < -nx / 2 + 1 || k > nx / 2) return false;
        if (domain_.kind == DomainKind::channel) return l >= 1 && l <= ny;
        return l >= -ny / 2 + 1 && l <= ny / 2;
    }

    Complex& at(int k, int l) { return coeffs_[index(k, l)]; }
    const Complex& at(int k, int l) const { return coeffs_[index(k, l)]; }

    /// Coefficient of mode (k,l), or 0 when outside the stored band.
    Complex get(int k, int l) const { return has_mode(k, l) ? at(k, l) : Complex(0, 0); }

    template <class F> // F(k, l, Complex&)
    void for_each(F&& f) {
        for (int ix = 0; ix < domain_.nx; ++ix)
            for (int iy = 0; iy < domain_.ny; ++iy)
                f(k_of(ix), l_of(iy), coeffs_[size_t(ix) * domain_.ny + iy]);
    }
    template <class F> // F(k, l, const Complex&)
    void for_each(F&& f) const {
        for (int ix = 0; ix < domain_.nx; ++ix)
            for (int iy = 0; iy < domain_.ny; ++iy)
                f(k_of(ix), l_of(iy), coeffs_[size_t(ix) * domain_.ny + iy]);
    }

    /// Enforce c(-k,-l) = conj(c(k,l)) and drop the ambiguous Nyquist lines.
    void make_real() {
        if (domain_.kind == DomainKind::channel) {
            for (int ix = 0; ix < domain_.nx; ++ix)
                for (int iy = 0; iy < domain_.ny; ++iy) {
                    const int k = k_of(ix);
                    if (k == domain_.nx / 2) { at_slot(ix, iy) = 0.0; continue; }
                    if (k < 0) continue;
                    Complex avg = 0.5 * (at_slot(ix, iy) + std::conj(slot_neg(ix, iy)));
                    at_slot(ix, iy) = avg;
                    if (k > 0) slot_neg(ix, iy) = std::conj(avg);
                    else at_slot(ix, iy) = Complex(avg.real(), 0.0);
                }
            return;
        }
        const int nx = domain_.nx, ny = domain_.ny;
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < ny; ++iy) {
                const int k = k_of(ix), l = l_of(iy);
                if (k == nx / 2 || l == ny / 2) { coeffs_[size_t(ix) * ny + iy] = 0.0; continue; }
                if (k < 0 || (k == 0 && l < 0)) continue;
                Complex& a = at(k, l);
                if (k == 0 && l == 0) { a = Complex(a.real(), 0.0); continue; }
                Complex& b = at(-k, -l);
                const Complex avg = 0.5 * (a + std::conj(b));
                a = avg;
                b = std::conj(avg);
            }
    }

    double mean() const {
        return domain_.kind == DomainKind::channel ? 0.0 : at(0, 0).real();
    }

    SpectralField& operator+=(const SpectralField& o) { return zip(o, std::plus<>()); }
    SpectralField& operator-=(const SpectralField& o) { return zip(o, std::minus<>()); }
    SpectralField& operator*=(double s) {
        for (auto& c : coeffs_) c *= s;
        return *this;
    }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

private:
    template <class Op>
    SpectralField& zip(const SpectralField& o, Op op) {
        if (!(domain_ == o.domain_)) throw ConfigError("field domains differ");
        for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = op(coeffs_[i], o.coeffs_[i]);
        return *this;
    }
    Complex& at_slot(int ix, int iy) { return coeffs_[size_t(ix) * domain_.ny + iy]; }
    Complex& slot_neg(int ix, int iy) {
        const int jx = ix == 0 ? 0 : domain_.nx - ix;
        return coeffs_[size_t(jx) * domain_.ny + iy];
    }
    size_t index(int k, int l) const {
        if (!has_mode(k, l)) throw ConfigError("mode index outside the stored band");
        const int nx = domain_.nx, ny = domain_.ny;
        const int ix = k >= 0 ? k : k + nx;
        int iy;
        if (domain_.kind == DomainKind::channel) iy = l - 1;
        else iy = l >= 0 ? l : l + ny;
        return size_t(ix) * ny + iy;
    }

    DomainSpec domain_;
    std::vector<Complex> coeffs_;
};

// --- constructors for common single-parity modes -------------------------

/// amp * cos(k x/delta) * cos(l y); k,l >= 0 (k=0 or l=0 degenerate cases ok).
inline SpectralField make_cos_cos(const DomainSpec& d, int k, int l, double amp = 1.0) {
    SpectralField f(d);
    const double q = amp / ((k ? 2.0 : 1.0) * (l ? 2.0 : 1.0));
    f.at(k, l) += q;
    if (k) f.at(-k, l) += q;
    if (l) f.at(k, -l) += q;
    if (k && l) f.at(-k, -l) += q;
    return f;
}

inline SpectralField make_sin_sin(const DomainSpec& d, int k, int l, double amp = 1.0) {
    SpectralField f(d);
    const double q = amp / 4.0;
    f.at(k, l) += -q;
    f.at(-k, -l) += -q;
    f.at(k, -l) += q;
    f.at(-k, l) += q;
    return f;
}

/// amp * sin(k x/delta) * cos(l y), k >= 1, l >= 0.
inline SpectralField make_sin_cos(const DomainSpec& d, int k, int l, double amp = 1.0) {
    SpectralField f(d);
    const double q = amp / (2.0 * (l ? 2.0 : 1.0));
    const Complex v(0.0, -q);
    f.at(k, l) += v;
    f.at(-k, l) += std::conj(v);
    if (l) {
        f.at(k, -l) += v;
        f.at(-k, -l) += std::conj(v);
    }
    return f;
}

/// amp * cos(k x/delta) * sin(l y), k >= 0, l >= 1.
inline SpectralField make_cos_sin(const DomainSpec& d, int k, int l, double amp = 1.0) {
    SpectralField f(d);
    const double q = amp / (2.0 * (k ? 2.0 : 1.0));
    const Complex v(0.0, -q);
    f.at(k, l) += v;
    f.at(k, -l) += std::conj(v);
    if (k) {
        f.at(-k, l) += v;
        f.at(-k, -l) += std::conj(v);
    }
    return f;
}

// --- amplitude extraction (torus) -----------------------------------------

inline double cos_cos_amplitude(const SpectralField& f, int k, int l) {
    double a = f.get(k, l).real();
    if (k) a += f.get(-k, l).real();
    if (l) a += f.get(k, -l).real();
    if (k && l) a += f.get(-k, -l).real();
    return a;
}

inline double sin_sin_amplitude(const SpectralField& f, int k, int l) {
    return f.get(k, -l).real() + f.get(-k, l).real() - f.get(k, l).real() -
           f.get(-k, -l).real();
}

inline double sin_cos_amplitude(const SpectralField& f, int k, int l) {
    double a = -f.get(k, l).imag() + f.get(-k, l).imag();
    if (l) a += -f.get(k, -l).imag() + f.get(-k, -l).imag();
    return a;
}

} // namespace kolm
