#include "orbitforge/matrix.hpp"

namespace orbitforge {

template class Mat<Rational>;
template class Mat<GaussianRational>;
template class Mat<RationalQuaternion>;

}  // namespace orbitforge
