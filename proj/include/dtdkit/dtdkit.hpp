#pragma once

#include "dtdkit/error.hpp"
#include "dtdkit/dyck.hpp"
#include "dtdkit/automata.hpp"
#include "dtdkit/regex.hpp"
#include "dtdkit/dfa_io.hpp"
#include "dtdkit/cfg.hpp"
#include "dtdkit/irr.hpp"
#include "dtdkit/pairs.hpp"
#include "dtdkit/xml_grammar.hpp"
#include "dtdkit/dtd.hpp"
#include "dtdkit/hedge.hpp"
#include "dtdkit/regular_xml.hpp"
