#include "maxrep/errors.hpp"

namespace maxrep {

void rethrow_with_field(const std::string& field) {
  try {
    throw;
  } catch (const InvalidParameter& e) {
    throw InvalidParameter(field + ": " + e.what());
  } catch (const NonPSDCovariance& e) {
    throw NonPSDCovariance(field + ": " + e.what());
  } catch (const UnknownMarginal& e) {
    throw UnknownMarginal(field + ": " + e.what());
  } catch (const UnsupportedMarginal& e) {
    throw UnsupportedMarginal(field + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(field + ": " + e.what());
  }
}

} // namespace maxrep
