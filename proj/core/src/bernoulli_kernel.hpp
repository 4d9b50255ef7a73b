#pragma once

// Cylinder-descent evaluation of Bernoulli masses and distribution-function
// integrals. Instantiated with Real for exact queries and with double for
// the Monte Carlo hot path.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>
#include <vector>

#include "scenerylab/errors.hpp"
#include "scenerylab/shift_bernoulli.hpp"

namespace scenerylab {

namespace kmath {
inline double log(double x) { return std::log(x); }
inline Real log(Real x) { return rlog(x); }
inline double ldexp(double x, int e) { return std::ldexp(x, e); }
inline Real ldexp(Real x, int e) { return rldexp(x, e); }
// Binary exponent e with x = f 2^e, 1/2 <= f < 1, for x > 0.
inline int exponent(double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const int biased = static_cast<int>((bits >> 52) & 0x7ff);
  if (biased == 0) {
    int e = 0;
    std::frexp(x, &e);
    return e;
  }
  return biased - 1022;
}
inline int exponent(Real x) {
  int e = 0;
  rfrexp(x, &e);
  return e;
}
inline double floor(double x) { return std::floor(x); }
inline Real floor(Real x) { return rfloor(x); }
template <class T>
T eps();
template <>
inline double eps<double>() { return 1e-13; }
template <>
inline Real eps<Real>() { return kRealEps / 4; }
}  // namespace kmath

// value * exp(logScale)
template <class T>
struct Scaled {
  T logScale = 0;
  T value = 0;
};

template <class T>
class BernoulliKernel {
 public:
  struct Branch {
    long l;
    long rank;  // left-to-right order
    T lo, hi;
    T p;  // mass of the branch
    T q;  // p / expansion
    bool lump;  // unresolved accumulation region next to 0
    // Mass and first moment of the branches left and right of this one.
    T massLeft, meanLeft, massRight, meanRight;
    T scale = 0;  // expansion factor of a signed branch
  };

  BernoulliKernel(const WeightFamily& w, int cap) : signed_(w.isSigned()) {
    if (signed_) {
      K_ = cap;
      P_.assign(K_ + 2, 0);
      c_.assign(K_ + 2, 0);
      for (int n = 1; n <= K_; ++n) {
        P_[n] = static_cast<T>(w.p(n));
        c_[n] = kmath::ldexp(T(3), -(n + 1));
      }
      P_[K_ + 1] = static_cast<T>(w.tailSum(K_));
      tail_.assign(K_ + 2, 0);
      mtail_.assign(K_ + 2, 0);
      for (int n = K_; n >= 0; --n) {
        tail_[n] = tail_[n + 1] + P_[n + 1];
        mtail_[n] = mtail_[n + 1] + P_[n + 1] * c_[n + 1];
      }
      head_.assign(K_ + 2, 0);
      mhead_.assign(K_ + 2, 0);
      for (int n = 1; n <= K_ + 1; ++n) {
        head_[n] = head_[n - 1] + P_[n];
        mhead_[n] = mhead_[n - 1] + P_[n] * c_[n];
      }
      mean_ = 0;
    } else {
      m_ = w.size();
      P_.resize(m_);
      for (long l = 0; l < m_; ++l) P_[l] = static_cast<T>(w.p(l));
      T num = 0;
      for (long l = 0; l < m_; ++l) num += P_[l] * (lowOf(l) + T(1) / m_);
      mean_ = num / (1 - T(1) / m_);
      c_.resize(m_);
      for (long l = 0; l < m_; ++l) c_[l] = lowOf(l) + (mean_ + 1) / m_;
      pre_.assign(m_ + 1, 0);
      mpre_.assign(m_ + 1, 0);
      for (long l = 0; l < m_; ++l) {
        pre_[l + 1] = pre_[l] + P_[l];
        mpre_[l + 1] = mpre_[l] + P_[l] * c_[l];
      }
      suf_.assign(m_ + 1, 0);
      msuf_.assign(m_ + 1, 0);
      for (long l = m_ - 1; l >= 0; --l) {
        suf_[l] = suf_[l + 1] + P_[l];
        msuf_[l] = msuf_[l + 1] + P_[l] * c_[l];
      }
    }
    buildTables();
  }

  T mean() const { return mean_; }

  const Branch& locate(T y) const {
    if (signed_) {
      long n = K_ + 1;
      if (y != 0) n = std::clamp<long>(1 - kmath::exponent(y < 0 ? -y : y), 1, K_ + 1);
      return y < 0 ? neg_[n] : pos_[n];
    }
    const T s = (y + 1) * m_ / 2;
    long l = static_cast<long>(kmath::floor(s));
    l = std::clamp<long>(l, 0, m_ - 1);
    return pos_[l];
  }

  T sigma(const Branch& b, T y) const {
    T z;
    if (signed_) {
      z = y * b.scale + (b.l < 0 ? T(3) : T(-3));
    } else {
      z = (y + 1) * m_ - T(2 * b.l + 1);
    }
    return std::clamp<T>(z, T(-1), T(1));
  }

  // mu([a, b]) as a scaled value; err collects an absolute bound on the
  // neglected part of value.
  Scaled<T> mass(T a, T b, T& err) const {
    a = std::clamp<T>(a, T(-1), T(1));
    b = std::clamp<T>(b, T(-1), T(1));
    Scaled<T> out;
    if (!(b > a)) return out;
    for (int depth = 0;; ++depth) {
      if (a <= -1 && b >= 1) {
        out.value = 1;
        return out;
      }
      const Branch& A = locate(a);
      const Branch& B = locate(b);
      if (A.l != B.l) {
        T between = 0, meanSum = 0;
        betweenSums(A, B, between, meanSum);
        out.value = partRight(A, a, err) + between + partLeft(B, b, err);
        return out;
      }
      if (A.lump || A.p == 0 || depth > kMaxDepth) {
        throw ToleranceError("bernoulli: interval lies below the resolvable depth");
      }
      out.logScale += kmath::log(A.p);
      a = sigma(A, a);
      b = sigma(A, b);
    }
  }

  // int_{(a, c]} (c - p) dmu(p)
  Scaled<T> k(T a, T c, T& err) const {
    a = std::clamp<T>(a, T(-1), T(1));
    c = std::clamp<T>(c, T(-1), T(1));
    Scaled<T> out;
    if (!(c > a)) return out;
    for (int depth = 0;; ++depth) {
      const Branch& A = locate(a);
      const Branch& B = locate(c);
      if (A.l != B.l || (a <= -1 && c >= 1)) {
        if (a <= -1 && c >= 1) {
          out.value = 1 - mean_;
          return out;
        }
        T between = 0, meanSum = 0;
        betweenSums(A, B, between, meanSum);
        T v = 0;
        if (A.lump) {
          v += (c - A.lo) * A.p / 2;
          err += (c - A.lo) * A.p / 2;
        } else {
          T u = 0, w = 0;
          uv(sigma(A, a), u, w, err);
          v += (c - A.hi) * A.p * u + A.q * w;
        }
        v += c * between - meanSum;
        if (B.lump) {
          v += (c - B.lo) * B.p / 2;
          err += (c - B.lo) * B.p / 2;
        } else {
          v += B.q * S(sigma(B, c), err);
        }
        out.value = v > 0 ? v : T(0);
        return out;
      }
      if (A.lump || A.p == 0 || depth > kMaxDepth) {
        throw ToleranceError("bernoulli: interval lies below the resolvable depth");
      }
      out.logScale += kmath::log(A.q);
      a = sigma(A, a);
      c = sigma(A, c);
    }
  }

  // mu([-1, z])
  T C(T z, T& err) const {
    T acc = 0, f = 1;
    for (int depth = 0; depth <= kMaxDepth; ++depth) {
      if (z <= -1) return acc;
      if (z >= 1) return acc + f;
      const Branch& b = locate(z);
      acc += f * massLeft(b);
      if (b.lump) {
        acc += f * b.p / 2;
        err += f * b.p / 2;
        return acc;
      }
      f *= b.p;
      if (f <= kmath::eps<T>() * acc) {
        err += f;
        return acc;
      }
      z = sigma(b, z);
    }
    err += f;
    return acc;
  }

  // mu([z, 1])
  T U(T z, T& err) const {
    T acc = 0, f = 1;
    for (int depth = 0; depth <= kMaxDepth; ++depth) {
      if (z <= -1) return acc + f;
      if (z >= 1) return acc;
      const Branch& b = locate(z);
      acc += f * massRight(b);
      if (b.lump) {
        acc += f * b.p / 2;
        err += f * b.p / 2;
        return acc;
      }
      f *= b.p;
      if (f <= kmath::eps<T>() * acc) {
        err += f;
        return acc;
      }
      z = sigma(b, z);
    }
    err += f;
    return acc;
  }

  // int_{[-1, z]} (z - p) dmu(p)
  T S(T z, T& err) const {
    T acc = 0, f = 1;
    for (int depth = 0; depth <= kMaxDepth; ++depth) {
      if (z <= -1) return acc;
      if (z >= 1) return acc + f * (1 - mean_);
      const Branch& b = locate(z);
      acc += f * (z * massLeft(b) - meanLeft(b));
      if (b.lump) {
        const T part = f * b.p * (z - b.lo) / 2;
        acc += part;
        err += part;
        return acc;
      }
      f *= b.q;
      if (2 * f <= kmath::eps<T>() * acc) {
        err += 2 * f;
        return acc;
      }
      z = sigma(b, z);
    }
    err += 2 * f;
    return acc;
  }

  // U(z) = mu([z, 1]) and V(z) = int_{(z, 1]} (1 - p) dmu(p) together.
  void uv(T z, T& u, T& v, T& err) const {
    T uAcc = 0, fu = 1;
    T vAcc = 0, alpha = 0, beta = 1;  // V = vAcc + alpha U(z) + beta V(z)
    for (int depth = 0; depth <= kMaxDepth; ++depth) {
      if (z <= -1) {
        u = uAcc + fu;
        v = vAcc + alpha + beta * (1 - mean_);
        return;
      }
      if (z >= 1) {
        u = uAcc;
        v = vAcc;
        return;
      }
      const Branch& b = locate(z);
      const T R = massRight(b);
      const T A = R - meanRight(b);
      uAcc += fu * R;
      vAcc += alpha * R + beta * A;
      if (b.lump) {
        uAcc += fu * b.p / 2;
        vAcc += (alpha + beta) * b.p;
        err += (fu + 2 * alpha + 2 * beta) * b.p;
        u = uAcc;
        v = vAcc;
        return;
      }
      const T cu = (1 - b.hi) * b.p;
      alpha = alpha * b.p + beta * cu;
      beta = beta * b.q;
      fu *= b.p;
      if (fu <= kmath::eps<T>() * uAcc && alpha + 2 * beta <= kmath::eps<T>() * vAcc) {
        err += fu + alpha + 2 * beta;
        u = uAcc;
        v = vAcc;
        return;
      }
      z = sigma(b, z);
    }
    err += fu + alpha + 2 * beta;
    u = uAcc;
    v = vAcc;
  }

 private:
  static constexpr int kMaxDepth = 30000;

  T lowOf(long l) const { return T(-1) + T(2 * l) / m_; }

  Branch signedBranch(long l) const {
    const long n = l < 0 ? -l : l;
    const bool lump = n == K_ + 1;
    const T small = lump ? T(0) : kmath::ldexp(T(1), static_cast<int>(-n));
    const T big = kmath::ldexp(T(1), static_cast<int>(1 - (lump ? K_ + 1 : n)));
    const T p = P_[n];
    const T q = lump ? T(0) : kmath::ldexp(p, static_cast<int>(-(n + 1)));
    const long rank = l < 0 ? n : 2 * K_ + 4 - n;
    Branch b;
    if (l < 0) {
      b = {l, rank, -big, -small, p, q, lump, head_[n - 1], -mhead_[n - 1], tail_[n] + tail_[0],
           mtail_[0] - mtail_[n]};
    } else {
      b = {l, rank, small, big, p, q, lump, tail_[0] + tail_[n], mtail_[n] - mtail_[0], head_[n - 1],
           mhead_[n - 1]};
    }
    if (!lump) b.scale = kmath::ldexp(T(1), static_cast<int>(n + 1));
    return b;
  }

  void buildTables() {
    if (signed_) {
      pos_.resize(K_ + 2);
      neg_.resize(K_ + 2);
      for (long n = 1; n <= K_ + 1; ++n) {
        pos_[n] = signedBranch(n);
        neg_[n] = signedBranch(-n);
      }
      return;
    }
    pos_.resize(m_);
    for (long l = 0; l < m_; ++l) {
      pos_[l] = {l, l, lowOf(l), lowOf(l + 1), P_[l], P_[l] / m_, false, pre_[l], mpre_[l], suf_[l + 1],
                 msuf_[l + 1]};
    }
  }

  static T massLeft(const Branch& b) { return b.massLeft; }
  static T meanLeft(const Branch& b) { return b.meanLeft; }
  static T massRight(const Branch& b) { return b.massRight; }
  static T meanRight(const Branch& b) { return b.meanRight; }

  // Mass and first moment of the branches strictly between A and B.
  void betweenSums(const Branch& A, const Branch& B, T& mass, T& meanSum) const {
    if (!signed_) {
      mass = B.l > A.l + 1 ? suf_[A.l + 1] - suf_[B.l] : T(0);
      meanSum = B.l > A.l + 1 ? msuf_[A.l + 1] - msuf_[B.l] : T(0);
      return;
    }
    const long na = A.l < 0 ? -A.l : A.l;
    const long nb = B.l < 0 ? -B.l : B.l;
    if (A.l < 0 && B.l < 0) {
      mass = nb > na + 1 ? tail_[na] - tail_[nb - 1] : T(0);
      meanSum = nb > na + 1 ? -(mtail_[na] - mtail_[nb - 1]) : T(0);
    } else if (A.l < 0) {
      mass = tail_[na] + tail_[nb];
      meanSum = mtail_[nb] - mtail_[na];
    } else {
      mass = na > nb + 1 ? tail_[nb] - tail_[na - 1] : T(0);
      meanSum = na > nb + 1 ? mtail_[nb] - mtail_[na - 1] : T(0);
    }
  }

  // mu([a, hi_A]) and mu([lo_B, b]).
  T partRight(const Branch& A, T a, T& err) const {
    if (A.lump) {
      err += A.p / 2;
      return A.p / 2;
    }
    return A.p * U(sigma(A, a), err);
  }
  T partLeft(const Branch& B, T b, T& err) const {
    if (B.lump) {
      err += B.p / 2;
      return B.p / 2;
    }
    return B.p * C(sigma(B, b), err);
  }

  bool signed_;
  int K_ = 0;
  long m_ = 0;
  T mean_ = 0;
  std::vector<T> P_, c_;
  std::vector<T> tail_, mtail_, head_, mhead_;
  std::vector<T> pre_, mpre_, suf_, msuf_;
  std::vector<Branch> pos_, neg_;
};

}  // namespace scenerylab
