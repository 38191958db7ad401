// Book chapters are compiled as doctests; see book/src.
