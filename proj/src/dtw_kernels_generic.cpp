#define AIRGATE_KERNEL_NS generic
#include "dtw_kernels.inc"
