#pragma once

#include "copula_ot/copula.h"
#include "copula_ot/coupling.h"
#include "copula_ot/distribution.h"
#include "copula_ot/errors.h"
#include "copula_ot/extended_real.h"
#include "copula_ot/oracle.h"
#include "copula_ot/quadrature.h"
#include "copula_ot/wasserstein.h"
