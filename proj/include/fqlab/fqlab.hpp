#ifndef FQLAB_FQLAB_HPP
#define FQLAB_FQLAB_HPP

#include "errors.hpp"
#include "intmat.hpp"
#include "laurent.hpp"
#include "univariate.hpp"
#include "cone.hpp"
#include "crystal.hpp"
#include "surface.hpp"
#include "lycheck.hpp"
#include "harness.hpp"

#endif  // FQLAB_FQLAB_HPP
