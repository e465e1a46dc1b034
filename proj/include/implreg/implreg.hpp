#pragma once

#include "implreg/diffusion.hpp"
#include "implreg/error.hpp"
#include "implreg/generators.hpp"
#include "implreg/graph.hpp"
#include "implreg/oracle.hpp"
#include "implreg/regularizers.hpp"
#include "implreg/sampling.hpp"
#include "implreg/sdp_solver.hpp"
#include "implreg/spectral.hpp"
#include "implreg/verification.hpp"
