#include "smb/coeffs.hpp"

#include <cmath>
#include <cstdint>
#include <mutex>
#include <unordered_map>

namespace smb {

namespace {

double ladder_raw(int dl, int dm, int l, int m) {
    if (l < 0 || std::abs(m) > l) return 0.0;
    auto ratio = [](double num, double den) {
        if (num <= 0.0) return 0.0;
        return std::sqrt(num / den);
    };
    const double lf = l, mf = m;
    if (dl == 0) {
        if (dm == 0) return mf;
        if (dm == +1) return ratio(lf * (lf + 1) - mf * (mf + 1), 1.0);
        return ratio(lf * (lf + 1) - mf * (mf - 1), 1.0);
    }
    if (dl == +1) {
        const double den = (2 * lf + 1) * (2 * lf + 3);
        if (dm == 0) return ratio((lf - mf + 1) * (lf + mf + 1), den);
        if (dm == +1) return ratio((lf + mf + 1) * (lf + mf + 2), den);
        return ratio((lf - mf + 1) * (lf - mf + 2), den);
    }
    const double den = (2 * lf + 1) * (2 * lf - 1);
    if (dm == 0) return ratio((lf - mf) * (lf + mf), den);
    if (dm == +1) return ratio((lf - mf) * (lf - mf - 1), den);
    return ratio((lf + mf - 1) * (lf + mf), den);
}

// Above this l the closed forms are cached; below it they are cheaper than
// the lookup.
constexpr int kMemoThreshold = 64;

std::unordered_map<uint64_t, double> memo;
std::mutex memo_mutex;

uint64_t memo_key(int dl, int dm, int l, int m) {
    const uint64_t a = static_cast<uint64_t>(dl + 1);
    const uint64_t b = static_cast<uint64_t>(dm + 1);
    const uint64_t c = static_cast<uint64_t>(l);
    const uint64_t d = static_cast<uint64_t>(static_cast<int64_t>(m) + (1 << 24));
    return (a << 60) | (b << 56) | (c << 28) | d;
}

} // namespace

double ladder_coefficient(int dl, int dm, int l, int m) {
    if (dl < -1 || dl > 1 || dm < -1 || dm > 1)
        throw InvalidLadder("shift (" + std::to_string(dl) + "," +
                            std::to_string(dm) + ") undefined");
    if (l <= kMemoThreshold) return ladder_raw(dl, dm, l, m);
    const uint64_t key = memo_key(dl, dm, l, m);
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    const double v = ladder_raw(dl, dm, l, m);
    std::lock_guard<std::mutex> lock(memo_mutex);
    memo.emplace(key, v);
    return v;
}

double casimir(int l) {
    if (l < 0)
        throw InvalidQuantumNumber("casimir of negative label " +
                                   std::to_string(l));
    return static_cast<double>(l) * (l + 1);
}

double gamma_factor(Side z, Side zp, double omega) {
    const double s = std::sin(omega / 2);
    if (std::abs(s) < 1e-12)
        throw RadialSingularity("gamma factor at omega = " +
                                std::to_string(omega));
    const double base = 0.25 / (s * s);
    return z == zp ? base : base * std::cos(omega);
}

} // namespace smb
