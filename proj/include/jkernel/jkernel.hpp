#pragma once

#include "construct.hpp"
#include "cyclotomic.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "jacobi.hpp"
#include "numeric.hpp"
#include "qseries.hpp"
#include "rational.hpp"
#include "sl2.hpp"
#include "verify.hpp"
#include "weil.hpp"
