#define AIRGATE_KERNEL_NS avx2
#include "dtw_kernels.inc"
