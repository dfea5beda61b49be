#pragma once

// Umbrella header: the full exact engine for central limit theorems of
// graph-independent variables — partitions and kernels, grid graphs, step
// graphons, decorated homomorphism densities, mixed-cumulant moments,
// limiting *-moments, and exact pre-limit moments with convergence tables.

#include "epsclt/scalar.hpp"
#include "epsclt/subsets.hpp"
#include "epsclt/graphs.hpp"
#include "epsclt/partitions.hpp"
#include "epsclt/graphon.hpp"
#include "epsclt/decorated.hpp"
#include "epsclt/cumulants.hpp"
#include "epsclt/limit_laws.hpp"
#include "epsclt/finite_n.hpp"
