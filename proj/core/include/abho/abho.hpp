#pragma once

#include "abho/action_phase.hpp"
#include "abho/classical_flow.hpp"
#include "abho/errors.hpp"
#include "abho/kernel.hpp"
#include "abho/model.hpp"
#include "abho/spectral_oracle.hpp"
#include "abho/stationary.hpp"
#include "abho/zmatrix.hpp"
