#pragma once

#include "errors.hpp"
#include "tolerances.hpp"
#include "linalg.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "models.hpp"
#include "triplets.hpp"
#include "unitary_catalog.hpp"
#include "weyl.hpp"
#include "spectra.hpp"
#include "config.hpp"
#include "experiment.hpp"
#include "report.hpp"
