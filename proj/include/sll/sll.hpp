#pragma once

#include "sll/errors.hpp"
#include "sll/modular.hpp"
#include "sll/finite_field.hpp"
#include "sll/witt.hpp"
#include "sll/matrix.hpp"
#include "sll/series.hpp"
#include "sll/quadform.hpp"
#include "sll/singularity.hpp"
#include "sll/dieudonne.hpp"
#include "sll/deformation.hpp"
#include "sll/local_model.hpp"
