#include <atomic>
#include <string>

#include "hmsim/error.hpp"
#include "hmsim/kernels.hpp"

namespace hmsim::kernels
{
#if !HMSIM_HAVE_AVX2_KERNELS
// Non-x86 builds: the AVX2 entry points exist but are never selected
namespace avx2
{
TrialCounts classify_trials(std::uint64_t s, std::uint64_t f, std::uint64_t n, double lo, double w, double t)
{
    return scalar::classify_trials(s, f, n, lo, w, t);
}
CutStats cut_stats(std::span<double const> v, double c)
{
    return scalar::cut_stats(v, c);
}
}  // namespace avx2
#endif

namespace
{
std::atomic<Backend>& backend_slot()
{
    static std::atomic<Backend> slot{best_available_backend()};
    return slot;
}
}  // namespace

std::string_view to_string(Backend b)
{
    switch (b)
    {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
    }
    return "unknown";
}

Backend backend_from_string(std::string_view name)
{
    if (name == "scalar")
        return Backend::scalar;
    if (name == "avx2")
        return Backend::avx2;
    if (name == "auto")
        return best_available_backend();
    throw ValidationError("unknown kernel backend '" + std::string(name) + "'");
}

bool backend_available(Backend b)
{
    switch (b)
    {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if HMSIM_HAVE_AVX2_KERNELS
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

Backend best_available_backend()
{
    return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

Backend active_backend()
{
    return backend_slot().load(std::memory_order_relaxed);
}

void set_backend(Backend b)
{
    if (!backend_available(b))
    {
        throw ValidationError("kernel backend '" + std::string(to_string(b))
                              + "' is not available on this CPU");
    }
    backend_slot().store(b, std::memory_order_relaxed);
}

TrialCounts classify_trials(std::uint64_t hashed_seed,
                            std::uint64_t first,
                            std::uint64_t count,
                            double lower,
                            double width,
                            double t)
{
    if (active_backend() == Backend::avx2)
        return avx2::classify_trials(hashed_seed, first, count, lower, width, t);
    return scalar::classify_trials(hashed_seed, first, count, lower, width, t);
}

CutStats cut_stats(std::span<double const> values, double c)
{
    if (active_backend() == Backend::avx2)
        return avx2::cut_stats(values, c);
    return scalar::cut_stats(values, c);
}

}  // namespace hmsim::kernels
