# src 모듈 초기화 (국소 P² 불변량 계산 패키지)
