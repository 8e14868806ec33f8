// Compiled with -mavx2; only called after a runtime CPU check.
#include <immintrin.h>

#include <array>
#include <bit>

#include "hmsim/kernels.hpp"
#include "hmsim/random.hpp"

namespace hmsim::kernels::avx2
{
namespace
{
// Low 64 bits of a 64x64 product, built from 32x32->64 multiplies
inline __m256i mullo64(__m256i a, __m256i b)
{
    __m256i const lo_lo = _mm256_mul_epu32(a, b);
    __m256i const hi_lo = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b);
    __m256i const lo_hi = _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32));
    return _mm256_add_epi64(lo_lo, _mm256_slli_epi64(_mm256_add_epi64(hi_lo, lo_hi), 32));
}

inline __m256i mix64(__m256i z)
{
    __m256i const m1 = _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ULL));
    __m256i const m2 = _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBULL));
    z = mullo64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 30)), m1);
    z = mullo64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 27)), m2);
    return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

inline __m256d to_unit(__m256i bits)
{
    __m256i const one_exp = _mm256_set1_epi64x(0x3FF0000000000000LL);
    __m256i const mant = _mm256_or_si256(_mm256_srli_epi64(bits, 12), one_exp);
    return _mm256_sub_pd(_mm256_castsi256_pd(mant), _mm256_set1_pd(1.0));
}
}  // namespace

TrialCounts classify_trials(std::uint64_t hashed_seed,
                            std::uint64_t first,
                            std::uint64_t count,
                            double lower,
                            double width,
                            double t)
{
    TrialCounts result;
    std::uint64_t const blocked = count - count % 4;

    auto const gamma = static_cast<long long>(golden_gamma);
    // Lane j starts at hashed_seed + (first + j + 1) * gamma
    std::uint64_t const base = hashed_seed + (first + 1) * golden_gamma;
    __m256i key_arg = _mm256_set_epi64x(static_cast<long long>(base + 3 * golden_gamma),
                                        static_cast<long long>(base + 2 * golden_gamma),
                                        static_cast<long long>(base + golden_gamma),
                                        static_cast<long long>(base));
    __m256i const step = _mm256_set1_epi64x(static_cast<long long>(4 * golden_gamma));
    __m256i const gamma_v = _mm256_set1_epi64x(gamma);
    __m256d const lower_v = _mm256_set1_pd(lower);
    __m256d const width_v = _mm256_set1_pd(width);
    __m256d const t_v = _mm256_set1_pd(t);

    for (std::uint64_t i = 0; i < blocked; i += 4)
    {
        __m256i const key = mix64(key_arg);
        __m256d const u = to_unit(mix64(_mm256_add_epi64(key, gamma_v)));
        __m256d const lambda = _mm256_add_pd(lower_v, _mm256_mul_pd(width_v, u));
        int const lt = _mm256_movemask_pd(_mm256_cmp_pd(lambda, t_v, _CMP_LT_OQ));
        int const eq = _mm256_movemask_pd(_mm256_cmp_pd(lambda, t_v, _CMP_EQ_OQ));
        result.below += static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(lt)));
        result.ties += static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(eq)));
        key_arg = _mm256_add_epi64(key_arg, step);
    }
    if (blocked < count)
    {
        result += scalar::classify_trials(
            hashed_seed, first + blocked, count - blocked, lower, width, t);
    }
    return result;
}

CutStats cut_stats(std::span<double const> values, double c)
{
    __m256d excess = _mm256_setzero_pd();
    __m256d active_sum = _mm256_setzero_pd();
    std::uint64_t active = 0;
    __m256d const c_v = _mm256_set1_pd(c);
    __m256d const zero = _mm256_setzero_pd();

    std::size_t const n = values.size();
    std::size_t const blocked = n - n % 4;
    for (std::size_t i = 0; i < blocked; i += 4)
    {
        __m256d const v = _mm256_loadu_pd(values.data() + i);
        excess = _mm256_add_pd(excess, _mm256_max_pd(_mm256_sub_pd(v, c_v), zero));
        __m256d const mask = _mm256_cmp_pd(v, c_v, _CMP_GT_OQ);
        active_sum = _mm256_add_pd(active_sum, _mm256_and_pd(v, mask));
        active += static_cast<std::uint64_t>(
            std::popcount(static_cast<unsigned>(_mm256_movemask_pd(mask))));
    }

    alignas(32) std::array<double, 4> ex;
    alignas(32) std::array<double, 4> as;
    _mm256_store_pd(ex.data(), excess);
    _mm256_store_pd(as.data(), active_sum);
    for (std::size_t i = blocked; i < n; ++i)
    {
        std::size_t const lane = i - blocked;
        double const v = values[i];
        double const diff = v - c;
        ex[lane] += diff > 0 ? diff : 0.0;
        if (v > c)
        {
            as[lane] += v;
            ++active;
        }
    }
    return {(ex[0] + ex[1]) + (ex[2] + ex[3]), (as[0] + as[1]) + (as[2] + as[3]), active};
}

}  // namespace hmsim::kernels::avx2
