#pragma once

#include "colombeau/errors.hpp"
#include "colombeau/multi_index.hpp"
#include "colombeau/quadrature.hpp"
#include "colombeau/bump.hpp"
#include "colombeau/mollifier.hpp"
#include "colombeau/smooth.hpp"
#include "colombeau/split_value.hpp"
#include "colombeau/distributions.hpp"
#include "colombeau/genfunc.hpp"
#include "colombeau/asymptotics.hpp"
#include "colombeau/association.hpp"
#include "colombeau/dsl.hpp"
#include "colombeau/circle/circle.hpp"
#include "colombeau/circle/kernels.hpp"
#include "colombeau/circle/genfunc_m.hpp"
#include "colombeau/circle/checks.hpp"
