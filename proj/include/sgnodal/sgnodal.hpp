#pragma once

#include "sgnodal/errors.hpp"
#include "sgnodal/union_find.hpp"
#include "sgnodal/sym_matrix.hpp"
#include "sgnodal/signed_graph.hpp"
#include "sgnodal/spectral.hpp"
#include "sgnodal/nodal.hpp"
#include "sgnodal/theorems.hpp"
#include "sgnodal/harness.hpp"
#include "sgnodal/report.hpp"
