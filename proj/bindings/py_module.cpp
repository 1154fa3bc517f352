#include <pybind11/pybind11.h>
PYBIND11_MODULE(_ekman, m) { m.doc() = "placeholder"; }
