#pragma once

#include "fsgrowth/compatibility.hpp"
#include "fsgrowth/diagnostics.hpp"
#include "fsgrowth/domain.hpp"
#include "fsgrowth/elliptic.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/field.hpp"
#include "fsgrowth/fixed_point.hpp"
#include "fsgrowth/function_spaces.hpp"
#include "fsgrowth/growth_odes.hpp"
#include "fsgrowth/heat.hpp"
#include "fsgrowth/interface.hpp"
#include "fsgrowth/io.hpp"
#include "fsgrowth/kinematics.hpp"
#include "fsgrowth/log.hpp"
#include "fsgrowth/material_laws.hpp"
#include "fsgrowth/mms.hpp"
#include "fsgrowth/nonlinear_terms.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/presets.hpp"
#include "fsgrowth/sparse.hpp"
#include "fsgrowth/state.hpp"
#include "fsgrowth/stencils.hpp"
#include "fsgrowth/stokes.hpp"
#include "fsgrowth/tensor.hpp"
