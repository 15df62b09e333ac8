#pragma once

#include "qnl/error.hpp"
#include "qnl/linalg.hpp"
#include "qnl/states.hpp"
#include "qnl/transform.hpp"
#include "qnl/discrimination.hpp"
#include "qnl/purification.hpp"
#include "qnl/rng.hpp"
