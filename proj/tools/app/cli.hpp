// Command-line front end. Returns the process exit status: 0 when every
// requested assertion holds, 1 when one fails, 2 on errors.
#pragma once

namespace unilab::app {

int run(int argc, char** argv);

}  // namespace unilab::app
