#pragma once

#include "dmfd/activation.hpp"
#include "dmfd/data_io.hpp"
#include "dmfd/error.hpp"
#include "dmfd/ffn.hpp"
#include "dmfd/matrix.hpp"
#include "dmfd/metrics.hpp"
#include "dmfd/random.hpp"
#include "dmfd/rbm.hpp"
#include "dmfd/serialize.hpp"
#include "dmfd/stack.hpp"
