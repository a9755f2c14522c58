#include <pybind11/pybind11.h>
PYBIND11_MODULE(_prexsyn, m) { m.doc() = "prexsyn"; }
