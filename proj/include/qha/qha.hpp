#pragma once

#include "qha/error.hpp"
#include "qha/special.hpp"
#include "qha/quadrature.hpp"
#include "qha/fock_core.hpp"
#include "qha/symbol.hpp"
#include "qha/radial_calculus.hpp"
#include "qha/operator_lab.hpp"
#include "qha/gelfand.hpp"
#include "qha/json_io.hpp"
#include "qha/report.hpp"
#include "qha/verify.hpp"
