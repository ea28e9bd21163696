#pragma once

#include <algorithm>
#include <cstddef>

#include "airgate/dtw.hpp"

namespace airgate::detail {

inline constexpr std::size_t kLanes = 8;
// Feature groups of kLanes handled per call by the one-dimensional kernel.
inline constexpr std::size_t kChains = 4;
inline constexpr std::size_t kWide = kLanes * kChains;

inline std::size_t band_radius(const DtwParams& p, std::size_t n, std::size_t m) {
    const std::size_t gap = n > m ? n - m : m - n;
    if (!p.band) return std::max(n, m);
    return std::max(*p.band, gap);
}

// probe: n x cols row-major. data: [row][col][lane] for max_rows rows; lanes
// with length 0 are unused. Writes one distance per used lane.
using PackKernel = void (*)(const double* probe, std::size_t n, std::size_t cols, const double* data,
                            std::size_t max_rows, const std::size_t* lengths, const DtwParams& params, double* out);
// a: n x kWide and b: m x kWide, one feature per lane. Writes kWide distances.
using LanesKernel = void (*)(const double* a, std::size_t n, const double* b, std::size_t m, const DtwParams& params,
                             double* out);

#define AIRGATE_DECLARE_KERNELS(ns)                                                                              \
    namespace ns {                                                                                               \
    void pack_kernel(const double*, std::size_t, std::size_t, const double*, std::size_t, const std::size_t*,   \
                     const DtwParams&, double*);                                                                \
    void lanes_1d_kernel(const double*, std::size_t, const double*, std::size_t, const DtwParams&, double*);   \
    }
AIRGATE_DECLARE_KERNELS(avx512)
AIRGATE_DECLARE_KERNELS(avx2)
AIRGATE_DECLARE_KERNELS(generic)
#undef AIRGATE_DECLARE_KERNELS

struct Kernels {
    PackKernel pack;
    LanesKernel lanes;
    const char* isa;
};

// Chosen once from the running CPU. Every variant yields identical results.
const Kernels& kernels();

}  // namespace airgate::detail
