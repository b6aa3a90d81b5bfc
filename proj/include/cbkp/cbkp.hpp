#pragma once

#include "cbkp/diffalg.hpp"
#include "cbkp/errors.hpp"
#include "cbkp/hierarchy.hpp"
#include "cbkp/psido.hpp"
#include "cbkp/relations.hpp"
#include "cbkp/scalar.hpp"
#include "cbkp/serialize.hpp"
#include "cbkp/verify.hpp"
