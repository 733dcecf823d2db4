#pragma once

#include "splitfem/closures.hpp"
#include "splitfem/diagnostics.hpp"
#include "splitfem/dynamics.hpp"
#include "splitfem/errors.hpp"
#include "splitfem/integrators.hpp"
#include "splitfem/mesh.hpp"
#include "splitfem/operators.hpp"
#include "splitfem/testcases.hpp"
