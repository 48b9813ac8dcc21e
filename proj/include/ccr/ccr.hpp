#pragma once

#include "ccr/errors.hpp"
#include "ccr/rational.hpp"
#include "ccr/qnum.hpp"
#include "ccr/poly.hpp"
#include "ccr/opexpr.hpp"
#include "ccr/linop.hpp"
#include "ccr/opcore.hpp"
#include "ccr/operators.hpp"
#include "ccr/maps.hpp"
#include "ccr/calculus.hpp"
#include "ccr/hahn.hpp"
#include "ccr/dsl.hpp"
#include "ccr/verify.hpp"
#include "ccr/json.hpp"
