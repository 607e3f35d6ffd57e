#ifndef ALMAB_ALMAB_HPP
#define ALMAB_ALMAB_HPP

#include "almab/core.hpp"
#include "almab/frames.hpp"
#include "almab/group.hpp"
#include "almab/hermitian.hpp"
#include "almab/io.hpp"
#include "almab/measures.hpp"
#include "almab/multiplicity.hpp"
#include "almab/quotient.hpp"

#endif
