// placeholder main; the verification CLI is assembled after the library
#include <iostream>

int main()
{
    std::cout << "lpsemi-cli: not yet wired\n";
    return 1;
}
