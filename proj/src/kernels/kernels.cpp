#include "mph/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "mph/common.hpp"

namespace mph::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

struct Dispatch {
    const Ops* ops;
    Isa isa;
};

Dispatch select_initial() {
    bool want_avx2 = cpu_has_avx2() && avx2_ops() != nullptr;
    if (const char* env = std::getenv("MPH_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) {
            want_avx2 = false;
        } else if (std::strcmp(env, "avx2") == 0) {
            if (!cpu_has_avx2() || avx2_ops() == nullptr)
                throw ConfigError("MPH_KERNELS=avx2 but AVX2 is unavailable on this CPU/build");
            want_avx2 = true;
        } else if (std::strcmp(env, "auto") != 0) {
            throw ConfigError(std::string("unknown MPH_KERNELS value '") + env +
                              "' (expected scalar, avx2, or auto)");
        }
    }
    if (want_avx2) return {avx2_ops(), Isa::Avx2};
    return {&scalar_ops(), Isa::Scalar};
}

Dispatch& dispatch() {
    static Dispatch d = select_initial();
    return d;
}

}  // namespace

Isa active_isa() { return dispatch().isa; }

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
    if (isa == Isa::Avx2) {
        if (!cpu_has_avx2() || avx2_ops() == nullptr)
            throw ConfigError("AVX2 kernels unavailable on this CPU/build");
        dispatch() = {avx2_ops(), Isa::Avx2};
    } else {
        dispatch() = {&scalar_ops(), Isa::Scalar};
    }
}

double dot(std::span<const double> x, std::span<const double> y) {
    return dispatch().ops->dot(x.data(), y.data(), x.size());
}

double sum(std::span<const double> x) { return dispatch().ops->sum(x.data(), x.size()); }

double mean(std::span<const double> x) {
    return x.empty() ? 0.0 : sum(x) / static_cast<double>(x.size());
}

double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
    return dispatch().ops->sum_abs_diff(a.data(), b.data(), a.size());
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    return dispatch().ops->sum_sq_diff(a.data(), b.data(), a.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    dispatch().ops->axpy(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> x) { dispatch().ops->scale(a, x.data(), x.size()); }

void add(std::span<const double> x, std::span<double> y) {
    dispatch().ops->add(x.data(), y.data(), x.size());
}

}  // namespace mph::kernels
