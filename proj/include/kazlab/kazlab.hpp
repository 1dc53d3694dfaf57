#pragma once

#include "kazlab/circle_point.hpp"
#include "kazlab/errors.hpp"
#include "kazlab/heisenberg.hpp"
#include "kazlab/integer_sequence.hpp"
#include "kazlab/kazhdan.hpp"
#include "kazlab/measure_file.hpp"
#include "kazlab/parallel.hpp"
#include "kazlab/representation.hpp"
#include "kazlab/scenario.hpp"
#include "kazlab/spectral_measure.hpp"
#include "kazlab/tensor_product.hpp"
#include "kazlab/weyl.hpp"
