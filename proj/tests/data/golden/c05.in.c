int count_braces(const char *s) {
    int count = 0;
    do {
        if (*s == '{') count++;
    } while (*s++);
    return count;
}
