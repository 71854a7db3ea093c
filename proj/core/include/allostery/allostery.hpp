#pragma once

#include "allostery/atoms.hpp"
#include "allostery/base_group.hpp"
#include "allostery/castle.hpp"
#include "allostery/comparison.hpp"
#include "allostery/criterion.hpp"
#include "allostery/dynamics.hpp"
#include "allostery/errors.hpp"
#include "allostery/forge.hpp"
#include "allostery/non_af.hpp"
#include "allostery/numeric.hpp"
#include "allostery/verify.hpp"
#include "allostery/wreath.hpp"
