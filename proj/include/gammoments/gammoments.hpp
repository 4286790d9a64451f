#pragma once

#include "gammoments/errors.hpp"
#include "gammoments/specfun.hpp"
#include "gammoments/quadrature.hpp"
#include "gammoments/momentseq.hpp"
#include "gammoments/bernstein.hpp"
#include "gammoments/idlab.hpp"
#include "gammoments/meldens.hpp"
#include "gammoments/diagnostics.hpp"
