#pragma once

#include "grassorth/errors.hpp"
#include "grassorth/scalar.hpp"
#include "grassorth/matrix.hpp"
#include "grassorth/forms.hpp"
#include "grassorth/subspaces.hpp"
#include "grassorth/random.hpp"
#include "grassorth/grassmannian.hpp"
#include "grassorth/automorphisms.hpp"
#include "grassorth/polynomial.hpp"
#include "grassorth/json_codec.hpp"
#include "grassorth/maps.hpp"
#include "grassorth/rigidity.hpp"
#include "grassorth/serialize.hpp"
