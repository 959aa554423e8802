#pragma once

#include <cstddef>
#include <span>
#include <string>

// Data-parallel arithmetic kernels used by the model training and scoring
// inner loops. Each operation has a scalar reference implementation and an
// AVX2 variant; the active variant is chosen once at startup from CPU
// capabilities (override with MPH_KERNELS=scalar|avx2).
//
// Elementwise kernels (axpy, scale, add) are bit-identical across variants.
// Reductions (dot, sum, ...) accumulate in a different order under SIMD and
// agree with the reference to tight relative tolerance; the equivalence
// tests pin this down.

namespace mph::kernels {

enum class Isa { Scalar, Avx2 };

struct Ops {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*sum_abs_diff)(const double*, const double*, std::size_t);
    double (*sum_sq_diff)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale)(double, double*, std::size_t);
    void (*add)(const double*, double*, std::size_t);
};

/// Reference implementations; always available, used as the equivalence oracle.
const Ops& scalar_ops();

/// AVX2 implementations. Null pointers when the build target lacks AVX2 support.
const Ops* avx2_ops();

/// The variant selected at startup.
Isa active_isa();
std::string isa_name(Isa isa);

/// Force a variant (tests). Throws ConfigError if the variant is unavailable.
void force_isa(Isa isa);

// --- dispatched entry points ------------------------------------------------

double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
double mean(std::span<const double> x);
double sum_abs_diff(std::span<const double> a, std::span<const double> b);
double sum_sq_diff(std::span<const double> a, std::span<const double> b);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// x *= a
void scale(double a, std::span<double> x);
/// y += x
void add(std::span<const double> x, std::span<double> y);

}  // namespace mph::kernels
