#pragma once

#include "ivopt/error.hpp"
#include "ivopt/interval.hpp"
#include "ivopt/manifold.hpp"
#include "ivopt/expr.hpp"
#include "ivopt/function.hpp"
#include "ivopt/calculus.hpp"
#include "ivopt/domain.hpp"
#include "ivopt/convexity.hpp"
#include "ivopt/lp.hpp"
#include "ivopt/kkt.hpp"
#include "ivopt/builtins/catalog.hpp"
#include "ivopt/io.hpp"
#include "ivopt/repro.hpp"
