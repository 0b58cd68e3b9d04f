#pragma once

// Umbrella header for the exact SU(3) Clebsch-Gordan engine.

#include "su3cg/closed_forms.hpp"
#include "su3cg/batch.hpp"
#include "su3cg/cg_engine.hpp"
#include "su3cg/exact.hpp"
#include "su3cg/fock_oracle.hpp"
#include "su3cg/half_int.hpp"
#include "su3cg/hw_solver.hpp"
#include "su3cg/matrix_elements.hpp"
#include "su3cg/su2_wigner.hpp"
#include "su3cg/su3_rep.hpp"
#include "su3cg/symmetry.hpp"
#include "su3cg/verification.hpp"
