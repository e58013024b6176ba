#pragma once

// Umbrella header: spectra of Gram matrices of sequences in projective
// Hilbert space, the Marchenko-Pastur reference law, and the experiment
// drivers that compare the two.

#include "gramspec/classical_words.hpp"
#include "gramspec/dynamics.hpp"
#include "gramspec/experiment.hpp"
#include "gramspec/fit.hpp"
#include "gramspec/gram.hpp"
#include "gramspec/io.hpp"
#include "gramspec/mp_law.hpp"
#include "gramspec/random_states.hpp"
#include "gramspec/rng.hpp"
#include "gramspec/spectrum.hpp"
#include "gramspec/states.hpp"
