#pragma once

#include "smoothperron/arith.hpp"
#include "smoothperron/experiment.hpp"
#include "smoothperron/io.hpp"
#include "smoothperron/kernels.hpp"
#include "smoothperron/lineshift.hpp"
#include "smoothperron/perron.hpp"
#include "smoothperron/polynomial.hpp"
#include "smoothperron/quadrature.hpp"
#include "smoothperron/series.hpp"
#include "smoothperron/zeta.hpp"

namespace smoothperron {
inline constexpr const char* kVersion = "0.1.0";
}
