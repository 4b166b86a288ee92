#ifndef ASC_ASC_HPP
#define ASC_ASC_HPP

#include "asc/layout.hpp"
#include "asc/complex.hpp"
#include "asc/random.hpp"
#include "asc/isomorphism.hpp"
#include "asc/samplers.hpp"
#include "asc/walk.hpp"
#include "asc/diagnostics.hpp"
#include "asc/oracle.hpp"
#include "asc/experiments.hpp"

#endif  // ASC_ASC_HPP
