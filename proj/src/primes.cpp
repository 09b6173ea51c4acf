#include "romanov/primes.hpp"

#include "romanov/errors.hpp"
#include "romanov/parallel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace romanov {

u64 powmod(u64 base, u64 exp, u64 m) noexcept {
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

u64 gcd(u64 a, u64 b) noexcept { return std::gcd(a, b); }

u64 isqrt(u64 n) noexcept {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

u64 mod_inverse(i64 a, u64 m) {
    if (m == 0) throw DomainError("mod_inverse: modulus must be >= 1");
    if (m == 1) return 0;
    i128 r0 = static_cast<i128>(m);
    i128 r1 = static_cast<i128>(a) % static_cast<i128>(m);
    if (r1 < 0) r1 += m;
    i128 t0 = 0, t1 = 1;
    while (r1 != 0) {
        const i128 q = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
        std::tie(t0, t1) = std::pair{t1, t0 - q * t1};
    }
    if (r0 != 1)
        throw NoInverseError("mod_inverse: gcd(" + std::to_string(a) + ", " + std::to_string(m) +
                             ") = " + std::to_string(static_cast<long long>(r0)) + " > 1");
    if (t0 < 0) t0 += m;
    return static_cast<u64>(t0);
}

Congruence crt_combine(std::span<const Congruence> pairs) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].modulus == 0) throw DomainError("crt_combine: modulus 0 at index " + std::to_string(i));
        if (pairs[i].residue >= pairs[i].modulus)
            throw DomainError("crt_combine: residue " + std::to_string(pairs[i].residue) +
                              " not reduced modulo " + std::to_string(pairs[i].modulus));
        for (std::size_t j = 0; j < i; ++j) {
            const u64 g = gcd(pairs[i].modulus, pairs[j].modulus);
            if (g != 1)
                throw DomainError("crt_combine: moduli " + std::to_string(pairs[j].modulus) + " (index " +
                                  std::to_string(j) + ") and " + std::to_string(pairs[i].modulus) + " (index " +
                                  std::to_string(i) + ") share the factor " + std::to_string(g));
        }
    }
    Congruence acc{0, 1};
    for (const auto& c : pairs) {
        const u128 m = static_cast<u128>(acc.modulus) * c.modulus;
        if (m > kMaxRange) throw OverflowError("crt_combine: product of moduli exceeds 2^63");
        // acc.residue + acc.modulus * t == c.residue (mod c.modulus)
        const u64 inv = mod_inverse(static_cast<i64>(acc.modulus % c.modulus), c.modulus);
        const u64 diff = (c.residue + c.modulus - acc.residue % c.modulus) % c.modulus;
        const u64 t = mulmod(diff, inv, c.modulus);
        acc.residue = static_cast<u64>(acc.residue + static_cast<u128>(acc.modulus) * t);
        acc.modulus = static_cast<u64>(m);
    }
    return acc;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<u64, 12> kSmallPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
// Strong-pseudoprime bases with no 64-bit counterexample.
constexpr std::array<u64, 7> kWitnesses{2, 325, 9375, 28178, 450775, 9780504, 1795265022};

u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        auto g = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        u64 y = 2, x = 2, d = 1, q = 1, ys = 2;
        constexpr u64 m = 128;
        for (u64 r = 1; d == 1; r <<= 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = g(y);
            for (u64 k = 0; k < r && d == 1; k += m) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = g(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = gcd(q, n);
            }
        }
        if (d == n) {
            do {
                ys = g(ys);
                d = gcd(x > ys ? x - ys : ys - x, n);
            } while (d == 1);
        }
        if (d != n) return d;
    }
}

void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    for (u64 p : kSmallPrimes)
        if (n % p == 0) return n == p;
    if (n < 37 * 37) return true;
    const u64 d0 = n - 1;
    const int s = std::countr_zero(d0);
    const u64 d = d0 >> s;
    for (u64 a : kWitnesses) {
        a %= n;
        if (a == 0) continue;
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::pair<u64, int>> factorize(u64 n) {
    if (n == 0) throw DomainError("factorize: n must be >= 1");
    std::vector<u64> primes;
    for (u64 p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    factor_into(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<u64, int>> out;
    for (u64 p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

u64 euler_phi(u64 n) {
    if (n == 0) throw DomainError("euler_phi: n must be >= 1");
    u64 phi = n;
    for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

u64 largest_prime_factor(u64 n) {
    if (n < 2) throw DomainError("largest_prime_factor: n must be >= 2, got " + std::to_string(n));
    return factorize(n).back().first;
}

u64 prime_power_base(u64 n) {
    if (n < 2) return 0;
    if (n % 2 == 0) return std::has_single_bit(n) ? 2 : 0;
    if (is_prime(n)) return n;
    const auto f = factorize(n);
    return f.size() == 1 ? f.front().first : 0;
}

double von_mangoldt(u64 n) {
    if (n == 0) throw DomainError("von_mangoldt: n must be >= 1");
    const u64 p = prime_power_base(n);
    return p ? std::log(static_cast<double>(p)) : 0.0;
}

std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace detail {

std::vector<u64> odd_sieving_primes(u64 hi) {
    const u64 root = hi ? isqrt(hi - 1) : 0;
    auto all = primes_up_to(root);
    if (!all.empty() && all.front() == 2) all.erase(all.begin());
    return all;
}

void sieve_odd_block(std::span<const u64> odd_primes, u64 first, u64 nbits, u64* words) {
    const u64 nwords = (nbits + 63) / 64;
    std::fill(words, words + nwords, ~0ull);
    if (nbits & 63) words[nwords - 1] = (1ull << (nbits & 63)) - 1;
    if (nbits == 0) return;
    const u64 last = first + 2 * (nbits - 1);
    if (first == 1) words[0] &= ~1ull;
    for (u64 p : odd_primes) {
        if (p > last / p) break;
        u64 m = (first + p - 1) / p * p;
        if ((m & 1) == 0) m += p;
        m = std::max(m, p * p);
        if (m > last) continue;
        const u64 step = p;  // consecutive odd multiples are 2p apart, i.e. p bits
        for (u64 i = (m - first) >> 1; i < nbits; i += step) words[i >> 6] &= ~(1ull << (i & 63));
    }
}

} // namespace detail

PrimeTable::PrimeTable(u64 lo, u64 hi) : lo_(lo), hi_(hi), odd_base_(lo | 1) {
    nbits_ = hi > odd_base_ ? (hi - odd_base_ + 1) / 2 : 0;
    words_.assign((nbits_ + 63) / 64, 0);
}

PrimeTable PrimeTable::build(u64 lo, u64 hi, u64 byte_budget) {
    if (lo > hi) throw DomainError("build_table: lo > hi");
    if (hi > kMaxRange) throw DomainError("build_table: hi exceeds 2^63");
    const u64 bytes = ((hi - lo) / 2 + 64) / 8;
    if (bytes > byte_budget)
        throw CapacityError("build_table: range [" + std::to_string(lo) + ", " + std::to_string(hi) + ") needs ~" +
                            std::to_string(bytes) + " bytes, budget is " + std::to_string(byte_budget));
    PrimeTable t(lo, hi);
    if (t.nbits_ == 0) return t;
    const auto base = detail::odd_sieving_primes(hi);
    constexpr u64 seg_bits = kSegmentSpan / 2;
    static_assert(seg_bits % 64 == 0);
    const i64 nseg = static_cast<i64>((t.nbits_ + seg_bits - 1) / seg_bits);
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 s = 0; s < nseg; ++s) {
        const u64 b0 = static_cast<u64>(s) * seg_bits;
        const u64 nb = std::min(seg_bits, t.nbits_ - b0);
        detail::sieve_odd_block(base, t.odd_base_ + 2 * b0, nb, t.words_.data() + b0 / 64);
    }
    return t;
}

bool PrimeTable::is_prime(u64 n) const {
    if (!contains(n))
        throw std::out_of_range("PrimeTable: " + std::to_string(n) + " outside [" + std::to_string(lo_) + ", " +
                                std::to_string(hi_) + ")");
    return test(n);
}

u64 PrimeTable::count() const noexcept {
    u64 c = contains(2) ? 1 : 0;
    for (u64 w : words_) c += static_cast<u64>(std::popcount(w));
    return c;
}

namespace {
constexpr char kMagic[4] = {'P', 'T', 'B', '1'};

void put_u64(std::ostream& out, u64 v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

u64 get_u64(std::istream& in) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8)) throw FormatError(0, "sieve cache: truncated header");
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(buf[i]) << (8 * i);
    return v;
}
} // namespace

void PrimeTable::write(std::ostream& out) const {
    out.write(kMagic, 4);
    put_u64(out, lo_);
    put_u64(out, hi_);
    const u64 nbytes = (nbits_ + 7) / 8;
    std::string payload(nbytes, '\0');
    for (u64 i = 0; i < nbytes; ++i)
        payload[i] = static_cast<char>((words_[i / 8] >> (8 * (i % 8))) & 0xff);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

PrimeTable PrimeTable::read(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4)) throw FormatError(0, "sieve cache: truncated magic");
    if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError(0, "sieve cache: bad magic, expected PTB1");
    const u64 lo = get_u64(in);
    const u64 hi = get_u64(in);
    if (lo > hi || hi > kMaxRange) throw FormatError(0, "sieve cache: invalid range header");
    PrimeTable t(lo, hi);
    const u64 nbytes = (t.nbits_ + 7) / 8;
    std::string payload(nbytes, '\0');
    if (!in.read(payload.data(), static_cast<std::streamsize>(nbytes)))
        throw FormatError(0, "sieve cache: truncated payload, expected " + std::to_string(nbytes) + " bytes");
    for (u64 i = 0; i < nbytes; ++i)
        t.words_[i / 8] |= static_cast<u64>(static_cast<unsigned char>(payload[i])) << (8 * (i % 8));
    if (t.nbits_ & 63) {
        const u64 mask = (1ull << (t.nbits_ & 63)) - 1;
        if (t.words_.back() & ~mask) throw FormatError(0, "sieve cache: padding bits set");
    }
    return t;
}

PrimeOracle::PrimeOracle(u64 hi, u64 byte_budget) {
    if (hi / 16 <= byte_budget) table_ = PrimeTable::build(0, hi, byte_budget);
}

// ---------------------------------------------------------------------------

namespace {

// Runs f(seg_index, primes-in-segment visitor) over [0, x], one segment at a
// time per thread, without materializing the whole table.
template <class SegmentFn>
void for_each_segment(u64 x, SegmentFn&& fn) {
    if (x < 2) return;
    const u64 hi = x + 1;
    const auto base = detail::odd_sieving_primes(hi);
    constexpr u64 seg_bits = kSegmentSpan / 2;
    const u64 nbits = hi / 2;  // odd numbers 1, 3, ..., < hi
    const i64 nseg = static_cast<i64>((nbits + seg_bits - 1) / seg_bits);
#pragma omp parallel
    {
        std::vector<u64> words(seg_bits / 64);
#pragma omp for schedule(dynamic, 1)
        for (i64 s = 0; s < nseg; ++s) {
            const u64 b0 = static_cast<u64>(s) * seg_bits;
            const u64 nb = std::min(seg_bits, nbits - b0);
            const u64 first = 1 + 2 * b0;
            detail::sieve_odd_block(base, first, nb, words.data());
            auto visit = [&](auto&& f) {
                if (s == 0) f(u64{2});
                for (u64 w = 0; w < (nb + 63) / 64; ++w) {
                    u64 bits = words[w];
                    while (bits) {
                        const u64 i = (w << 6) + static_cast<u64>(std::countr_zero(bits));
                        f(first + 2 * i);
                        bits &= bits - 1;
                    }
                }
            };
            fn(s, visit);
        }
    }
}

void check_progression(const char* who, u64 q, u64 a) {
    if (q == 0) throw DomainError(std::string(who) + ": modulus must be >= 1");
    if (a >= q) throw DomainError(std::string(who) + ": residue must satisfy 0 <= a < q");
}

u64 segments_for(u64 x) {
    constexpr u64 seg_bits = kSegmentSpan / 2;
    return ((x + 1) / 2 + seg_bits - 1) / seg_bits;
}

} // namespace

ArithmeticCounts count_primes(u64 x, u64 q, u64 a) {
    check_progression("count_primes", q, a);
    if (x >= kMaxRange) throw DomainError("count_primes: x must be < 2^63");
    u64 total = 0;
    for_each_segment(x, [&](i64, auto&& visit) {
        u64 local = 0;
        visit([&](u64 p) { local += (p % q == a); });
#pragma omp atomic
        total += local;
    });
    return {x, q, a, total};
}

namespace {
template <class Accept>
double psi_kernel(u64 x, Accept&& accept_power) {
    std::vector<NeumaierSum> per_segment(x >= 2 ? segments_for(x) : 0);
    for_each_segment(x, [&](i64 s, auto&& visit) {
        NeumaierSum local;
        visit([&](u64 p) { accept_power(p, local); });
        per_segment[static_cast<std::size_t>(s)] = local;
    });
    NeumaierSum total;
    for (const auto& part : per_segment) total.merge(part);
    return total.value();
}
} // namespace

double chebyshev_psi(u64 x, u64 q, u64 a) {
    check_progression("chebyshev_psi", q, a);
    if (x >= kMaxRange) throw DomainError("chebyshev_psi: x must be < 2^63");
    return psi_kernel(x, [&](u64 p, NeumaierSum& acc) {
        const double lp = std::log(static_cast<double>(p));
        for (u64 pk = p;; pk *= p) {
            if (pk % q == a) acc.add(lp);
            if (pk > x / p) break;
        }
    });
}

double chebyshev_theta(u64 x) {
    if (x >= kMaxRange) throw DomainError("chebyshev_theta: x must be < 2^63");
    return psi_kernel(x, [](u64 p, NeumaierSum& acc) { acc.add(std::log(static_cast<double>(p))); });
}

} // namespace romanov
