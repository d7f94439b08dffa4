#include "bfem/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bfem {

namespace {

// Power series, used for small arguments where it is free of cancellation.
double series_j(int p, double x)
{
    const double h = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= p; ++i) term *= h / i;
    double sum = 0.0, comp = 0.0;
    const double h2 = h * h;
    for (int k = 0; k < 60; ++k) {
        // Kahan summation
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        term *= -h2 / ((k + 1.0) * (k + 1.0 + p));
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Miller's downward recurrence normalized by J0 + 2 sum J_{2k} = 1.
double miller_j(int p, double x)
{
    const int start = 2 * ((std::max(p, static_cast<int>(x)) + 40 + static_cast<int>(std::sqrt(60.0 * std::max(p, static_cast<int>(x)))) ) / 2);
    double jp1 = 0.0, j = 1e-300, result = 0.0, norm = 0.0;
    for (int n = start; n >= 1; --n) {
        const double jm1 = 2.0 * n / x * j - jp1;
        jp1 = j;
        j = jm1;
        if (n - 1 == p) result = j;
        if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * j;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j;  // J0 term
    return result / norm;
}

}  // namespace

double bessel_j(int p, double x)
{
    if (p < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
    if (x < 0) throw std::invalid_argument("bessel_j: argument must be >= 0");
    if (x == 0.0) return p == 0 ? 1.0 : 0.0;
    if (x <= 1.0 + 0.25 * p) return series_j(p, x);
    return miller_j(p, x);
}

double bessel_jprime(int p, double x)
{
    if (p == 0) return -bessel_j(1, x);
    return 0.5 * (bessel_j(p - 1, x) - bessel_j(p + 1, x));
}

BesselZero bessel_zero(int p, int q)
{
    if (p < 0 || q < 1) throw std::invalid_argument("bessel_zero: need p >= 0, q >= 1");
    const double step = kPi / 8.0;
    double a = p + 1.0;
    double fa = bessel_j(p, a);
    int found = 0;
    while (true) {
        const double b = a + step;
        const double fb = bessel_j(p, b);
        if (fa == 0.0 || (fa < 0) != (fb < 0)) {
            ++found;
            if (found == q) {
                double lo = a, hi = b, flo = fa;
                if (fa == 0.0) return {p, q, a};
                for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = bessel_j(p, mid);
                    if ((fm < 0) == (flo < 0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                double z = 0.5 * (lo + hi);
                for (int it = 0; it < 3; ++it) {
                    const double d = bessel_jprime(p, z);
                    const double zn = z - bessel_j(p, z) / d;
                    if (zn < lo || zn > hi) break;
                    z = zn;
                }
                return {p, q, z};
            }
        }
        a = b;
        fa = fb;
    }
}

bool condition_S(int p, int q)
{
    if (p < 0 || q < 1) throw std::invalid_argument("condition_S: invalid indices");
    return p == 0;
}

std::vector<DiscSpectrumEntry> disc_spectrum(double R0, int count)
{
    if (R0 <= 0) throw std::invalid_argument("disc_spectrum: R0 must be positive");
    if (count < 1) return {};
    // z_{p,q} > p and z_{0,q} ~ (q - 1/4) pi bound the candidate set.
    std::vector<DiscSpectrumEntry> all;
    const int qmax = count + 1;
    const double zcap = bessel_zero(0, qmax).z;
    for (int p = 0; p < zcap + 1; ++p) {
        for (int q = 1;; ++q) {
            const BesselZero z = bessel_zero(p, q);
            if (z.z > zcap) break;
            DiscSpectrumEntry e;
            e.value = (z.z / R0) * (z.z / R0);
            e.p = p;
            e.q = q;
            e.multiplicity = p == 0 ? 1 : 2;
            e.satisfies_S = condition_S(p, q);
            all.push_back(e);
        }
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
    std::vector<DiscSpectrumEntry> out;
    int index = 1;
    for (auto& e : all) {
        if (index > count) break;
        e.first_index = index;
        index += e.multiplicity;
        out.push_back(e);
    }
    return out;
}

DiscSpectrumEntry disc_eigenvalue(double R0, int n)
{
    if (n < 1) throw std::invalid_argument("disc_eigenvalue: index must be >= 1");
    for (const auto& e : disc_spectrum(R0, n))
        if (n >= e.first_index && n < e.first_index + e.multiplicity) return e;
    throw std::logic_error("disc_eigenvalue: index not covered");
}

double disc_eigenfunction(int q, double R0, const Vec2& x)
{
    const double r = x.norm();
    if (r >= R0) return 0.0;
    const double z = bessel_zero(0, q).z;
    return bessel_j(0, z * r / R0) / (std::sqrt(kPi) * std::abs(bessel_jprime(0, z)) * R0);
}

double disc_eigenfunction_mean(int q, double R0)
{
    const double z = bessel_zero(0, q).z;
    const double d = bessel_jprime(0, z);
    return -2.0 * std::sqrt(kPi) * R0 / z * (d > 0 ? 1.0 : -1.0);
}

}  // namespace bfem
