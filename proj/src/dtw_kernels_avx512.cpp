#define AIRGATE_KERNEL_NS avx512
#include "dtw_kernels.inc"
