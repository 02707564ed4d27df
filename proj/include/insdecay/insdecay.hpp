#pragma once

// Umbrella header.

#include "insdecay/analysis/calculus.hpp"
#include "insdecay/analysis/gronwall.hpp"
#include "insdecay/besov/besov_norm.hpp"
#include "insdecay/besov/bony.hpp"
#include "insdecay/besov/inequalities.hpp"
#include "insdecay/besov/littlewood_paley.hpp"
#include "insdecay/config/sim_config.hpp"
#include "insdecay/error.hpp"
#include "insdecay/harness/constants.hpp"
#include "insdecay/harness/decay.hpp"
#include "insdecay/harness/energy_ledger.hpp"
#include "insdecay/harness/experiment.hpp"
#include "insdecay/harness/fourier_splitting.hpp"
#include "insdecay/harness/initial_data.hpp"
#include "insdecay/harness/suites.hpp"
#include "insdecay/io/csv.hpp"
#include "insdecay/io/format.hpp"
#include "insdecay/io/report.hpp"
#include "insdecay/io/snapshot.hpp"
#include "insdecay/rng.hpp"
#include "insdecay/solver/density.hpp"
#include "insdecay/solver/flow_state.hpp"
#include "insdecay/solver/integrator.hpp"
#include "insdecay/solver/momentum.hpp"
#include "insdecay/solver/viscosity.hpp"
#include "insdecay/spectral/fft.hpp"
#include "insdecay/spectral/field.hpp"
#include "insdecay/spectral/grid.hpp"
#include "insdecay/spectral/norms.hpp"
#include "insdecay/spectral/operators.hpp"
#include "insdecay/transport/block_transport.hpp"
#include "insdecay/transport/product_law.hpp"
#include "insdecay/version.hpp"
