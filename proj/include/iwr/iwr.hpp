#pragma once

#include "iwr/numtheory.hpp"
#include "iwr/padic.hpp"
#include "iwr/cyclotomic.hpp"
#include "iwr/dirichlet.hpp"
#include "iwr/numberfield.hpp"
#include "iwr/linalg.hpp"
#include "iwr/qseries.hpp"
#include "iwr/modsym.hpp"
#include "iwr/iwasawa.hpp"
#include "iwr/padic_l.hpp"
#include "iwr/report.hpp"
#include "iwr/examples.hpp"
