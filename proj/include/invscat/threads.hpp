#pragma once

namespace invscat {

/// Worker threads for the parallel loops; 0 means one per hardware thread.
/// Results do not depend on this setting.
void set_worker_threads(unsigned n);
unsigned worker_threads();

}  // namespace invscat
