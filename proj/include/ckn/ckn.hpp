#pragma once

#include "ckn/battery.hpp"
#include "ckn/eigen.hpp"
#include "ckn/error.hpp"
#include "ckn/functionals.hpp"
#include "ckn/hermite.hpp"
#include "ckn/hermite_poly.hpp"
#include "ckn/modal.hpp"
#include "ckn/profile_dsl.hpp"
#include "ckn/profiles.hpp"
#include "ckn/quad.hpp"
#include "ckn/report.hpp"
#include "ckn/stability.hpp"
