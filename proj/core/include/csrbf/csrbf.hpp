#pragma once

#include "csrbf/collocation.hpp"
#include "csrbf/errors.hpp"
#include "csrbf/kernel.hpp"
#include "csrbf/model.hpp"
#include "csrbf/quadrature.hpp"
#include "csrbf/tuner.hpp"
