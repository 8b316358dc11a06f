public char letter(int score) {
    int grade = score / 10;
    switch (grade) {
    case 10: return 'A';
    case 9: return 'A';
    default: return 'B';
    }
}
