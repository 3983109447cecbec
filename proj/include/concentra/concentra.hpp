#ifndef CONCENTRA_CONCENTRA_HPP
#define CONCENTRA_CONCENTRA_HPP

#include "concentra/space.hpp"
#include "concentra/modulus.hpp"
#include "concentra/dislocation.hpp"
#include "concentra/sequence.hpp"
#include "concentra/chebyshev.hpp"
#include "concentra/convergence.hpp"
#include "concentra/profile.hpp"
#include "concentra/decomposition.hpp"
#include "concentra/inequalities.hpp"
#include "concentra/corpus.hpp"

#endif  // CONCENTRA_CONCENTRA_HPP
