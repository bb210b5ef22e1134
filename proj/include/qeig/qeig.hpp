#pragma once

#include "qeig/error.hpp"
#include "qeig/quaternion.hpp"
#include "qeig/hlcr.hpp"
#include "qeig/matrix.hpp"
#include "qeig/complex_eig.hpp"
#include "qeig/right_eig.hpp"
#include "qeig/left_eig.hpp"
