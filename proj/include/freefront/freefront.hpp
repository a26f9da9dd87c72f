#pragma once

#include "freefront/errors.hpp"
#include "freefront/model.hpp"
#include "freefront/tridiagonal.hpp"
#include "freefront/pde_solver.hpp"
#include "freefront/steady_state.hpp"
#include "freefront/semiwave.hpp"
#include "freefront/classify.hpp"
#include "freefront/compare.hpp"
#include "freefront/io.hpp"
#include "freefront/cli.hpp"
