#pragma once

#include "refla/bench.hpp"
#include "refla/factorize.hpp"
#include "refla/int.hpp"
#include "refla/io.hpp"
#include "refla/matrix.hpp"
#include "refla/permutation.hpp"
#include "refla/rational.hpp"
#include "refla/substitute.hpp"
#include "refla/update.hpp"
