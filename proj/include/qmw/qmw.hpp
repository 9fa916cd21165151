#pragma once

// Umbrella header for the quadrics-motive workbench.

#include "qmw/birkhoff.hpp"
#include "qmw/error.hpp"
#include "qmw/graph.hpp"
#include "qmw/hopf.hpp"
#include "qmw/integrate.hpp"
#include "qmw/laurent.hpp"
#include "qmw/matrix.hpp"
#include "qmw/motive.hpp"
#include "qmw/poly.hpp"
#include "qmw/quadric.hpp"
#include "qmw/rational.hpp"
#include "qmw/report.hpp"
#include "qmw/transversality.hpp"
#include "qmw/version.hpp"
