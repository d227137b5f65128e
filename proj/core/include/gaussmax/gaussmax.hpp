#pragma once

#include "gaussmax/ar1.hpp"
#include "gaussmax/corrmat.hpp"
#include "gaussmax/error.hpp"
#include "gaussmax/moments.hpp"
#include "gaussmax/orthant.hpp"
#include "gaussmax/partials.hpp"
