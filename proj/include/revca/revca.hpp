#pragma once

#include "revca/error.hpp"
#include "revca/lattice.hpp"
#include "revca/rule.hpp"
#include "revca/automaton.hpp"
#include "revca/linalg.hpp"
#include "revca/lift.hpp"
#include "revca/bch.hpp"
#include "revca/hamiltonian.hpp"
#include "revca/convergence.hpp"
#include "revca/spectral.hpp"
#include "revca/io.hpp"
