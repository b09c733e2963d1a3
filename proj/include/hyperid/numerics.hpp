#pragma once

#include "hyperid/big_complex.hpp"
#include "hyperid/errors.hpp"
#include "hyperid/family.hpp"
#include "hyperid/rational.hpp"
#include "hyperid/scalar.hpp"
#include "hyperid/special.hpp"
