#pragma once

#include "si/bootstrap.hpp"
#include "si/classfield.hpp"
#include "si/cmeval.hpp"
#include "si/curve.hpp"
#include "si/cyclotomic.hpp"
#include "si/factor.hpp"
#include "si/fixtures.hpp"
#include "si/genpoly.hpp"
#include "si/int_poly.hpp"
#include "si/modpoly.hpp"
#include "si/mpnum.hpp"
#include "si/qseries.hpp"
#include "si/quadforms.hpp"
#include "si/registry.hpp"
#include "si/ylinear.hpp"
