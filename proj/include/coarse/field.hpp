#pragma once

#include <cstdint>
#include <string>
#include <boost/multiprecision/cpp_int.hpp>

namespace coarse {

// Prime field with a process-wide modulus, set once per run (default 5).
// Sign theorems need characteristic != 2; callers passing p = 2 get a
// characteristic warning from the CLI, not from here.
class Fp {
public:
    Fp() : v_(0) {}
    Fp(long long x) {
        long long m = static_cast<long long>(p_);
        long long r = x % m;
        if (r < 0) r += m;
        v_ = static_cast<uint32_t>(r);
    }

    static void set_modulus(uint32_t p) { p_ = p; }
    static uint32_t modulus() { return p_; }

    uint32_t value() const { return v_; }

    friend Fp operator+(Fp a, Fp b) { return from_raw((a.v_ + b.v_) % p_); }
    friend Fp operator-(Fp a, Fp b) { return from_raw((a.v_ + p_ - b.v_) % p_); }
    friend Fp operator*(Fp a, Fp b) {
        return from_raw(static_cast<uint32_t>(
            (static_cast<uint64_t>(a.v_) * b.v_) % p_));
    }
    friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
    Fp operator-() const { return from_raw(v_ == 0 ? 0 : p_ - v_); }
    Fp& operator+=(Fp b) { *this = *this + b; return *this; }
    Fp& operator-=(Fp b) { *this = *this - b; return *this; }
    Fp& operator*=(Fp b) { *this = *this * b; return *this; }
    friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
    friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

    Fp inverse() const {
        // extended Euclid
        int64_t t = 0, newt = 1, r = p_, newr = v_;
        while (newr != 0) {
            int64_t q = r / newr;
            int64_t tmp = t - q * newt; t = newt; newt = tmp;
            tmp = r - q * newr; r = newr; newr = tmp;
        }
        if (t < 0) t += p_;
        return from_raw(static_cast<uint32_t>(t));
    }

    std::string str() const { return std::to_string(v_); }

private:
    static Fp from_raw(uint32_t v) { Fp x; x.v_ = v; return x; }
    uint32_t v_;
    static inline uint32_t p_ = 5;
};

inline bool is_zero(const Fp& x) { return x.value() == 0; }

// Exact rationals.
using Rat = boost::multiprecision::cpp_rational;

inline bool is_zero(const Rat& x) { return x == 0; }

inline std::string field_str(const Fp& x) { return x.str(); }
inline std::string field_str(const Rat& x) { return x.str(); }

template <class F> F field_from_int(long long n) { return F(n); }

} // namespace coarse
