#pragma once

#include "pfaff/deformation.hpp"
#include "pfaff/errors.hpp"
#include "pfaff/families.hpp"
#include "pfaff/form.hpp"
#include "pfaff/ideal.hpp"
#include "pfaff/linalg.hpp"
#include "pfaff/polynomial.hpp"
#include "pfaff/random.hpp"
#include "pfaff/rational.hpp"
#include "pfaff/slots.hpp"
#include "pfaff/twisted.hpp"
