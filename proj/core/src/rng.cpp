#include "landau/rng.hpp"

// All of rng.hpp is header-inline; this translation unit just anchors the
// header into the library build so misuse shows up at library-compile time.
